"""Monotone Boolean functions stored as bitstrings.

A function of ``n`` variables is a string of ``2**n`` bits. Character ``i``
(counting from the left, starting at 0) holds the value at the point
``p`` with ``i == sum(p[j] << j)``, so for two variables the string reads
``g(00) g(10) g(01) g(11)``. The leftmost character is the most significant
bit of the integer form, which makes string order, integer order and the
total order used for canonical representatives the same thing.

Splitting a string in half gives ``g0 * g1`` with ``g0`` the restriction to
``p_n = 0``; the function is monotone iff both halves are and ``g0 <= g1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ArityMismatchError, ResourceLimitError

MAX_ARITY = 6


def width(n: int) -> int:
    return 1 << n


def full_mask(n: int) -> int:
    return (1 << width(n)) - 1


def point_index(p: Sequence[int]) -> int:
    """Position of point ``p`` of the cube in the bitstring (0 = leftmost)."""
    return sum((int(b) & 1) << j for j, b in enumerate(p))


def point_of(index: int, n: int) -> tuple[int, ...]:
    return tuple((index >> j) & 1 for j in range(n))


@dataclass(frozen=True)
class Mbf:
    """A monotone Boolean function of ``n`` variables.

    ``value`` is the integer read from the bitstring, leftmost bit most
    significant. Construction does not check monotonicity; use
    :func:`is_monotone` or :meth:`parse` for external input.
    """

    value: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("arity must be nonnegative")
        if not 0 <= self.value <= full_mask(self.n):
            raise ValueError(f"value {self.value} does not fit in {width(self.n)} bits")

    @classmethod
    def from_string(cls, bits: str) -> "Mbf":
        size = len(bits)
        if size == 0 or size & (size - 1):
            raise ValueError(f"bitstring length {size} is not a power of two")
        if set(bits) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {bits!r}")
        return cls(int(bits, 2), size.bit_length() - 1)

    @classmethod
    def parse(cls, bits: str) -> "Mbf":
        """Like :meth:`from_string` but rejects non-monotone strings."""
        if not is_monotone(bits):
            raise ValueError(f"{bits} is not monotone")
        return cls.from_string(bits)

    @classmethod
    def bottom(cls, n: int) -> "Mbf":
        return cls(0, n)

    @classmethod
    def top(cls, n: int) -> "Mbf":
        return cls(full_mask(n), n)

    @property
    def bits(self) -> str:
        return format(self.value, f"0{width(self.n)}b")

    def at(self, p: Sequence[int]) -> int:
        """Value of the function at point ``p``."""
        return (self.value >> (width(self.n) - 1 - point_index(p))) & 1

    def halves(self) -> tuple["Mbf", "Mbf"]:
        if self.n == 0:
            raise ValueError("a function of zero variables has no halves")
        h = width(self.n - 1)
        return Mbf(self.value >> h, self.n - 1), Mbf(self.value & ((1 << h) - 1), self.n - 1)

    def __str__(self) -> str:
        return self.bits


def _same_arity(x: Mbf, y: Mbf) -> None:
    if x.n != y.n:
        raise ArityMismatchError(f"arity {x.n} vs {y.n}")


def leq(x: Mbf, y: Mbf) -> bool:
    _same_arity(x, y)
    return x.value & ~y.value == 0


def join(x: Mbf, y: Mbf) -> Mbf:
    _same_arity(x, y)
    return Mbf(x.value | y.value, x.n)


def meet(x: Mbf, y: Mbf) -> Mbf:
    _same_arity(x, y)
    return Mbf(x.value & y.value, x.n)


def concat(g0: Mbf, g1: Mbf) -> Mbf:
    _same_arity(g0, g1)
    return Mbf((g0.value << width(g0.n)) | g1.value, g0.n + 1)


def _reverse(value: int, w: int) -> int:
    return int(format(value, f"0{w}b")[::-1], 2)


def dual(x: Mbf) -> Mbf:
    """Reverse the bitstring and negate every bit."""
    return Mbf(_reverse(x.value, width(x.n)) ^ full_mask(x.n), x.n)


def is_monotone(bits: str | Sequence[int]) -> bool:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {bits!r}")
        seq = [int(c) for c in bits]
    else:
        seq = [int(b) for b in bits]
    size = len(seq)
    if size == 0 or size & (size - 1):
        raise ValueError(f"length {size} is not a power of two")
    n = size.bit_length() - 1
    for i in range(size):
        if seq[i]:
            for j in range(n):
                if not (i >> j) & 1 and not seq[i | (1 << j)]:
                    return False
    return True


# -- vectorized helpers on uint64 value arrays -------------------------------

_REV8 = np.array([int(format(b, "08b")[::-1], 2) for b in range(256)], dtype=np.uint8)


def reverse_values(values: np.ndarray, n: int) -> np.ndarray:
    """Bit-reverse each ``2**n``-bit word of ``values``."""
    v = np.ascontiguousarray(values, dtype="<u8")
    rb = _REV8[v.view(np.uint8).reshape(-1, 8)][:, ::-1]
    out = np.ascontiguousarray(rb).view("<u8").ravel().astype(np.uint64)
    return out >> np.uint64(64 - width(n))


def dual_values(values: np.ndarray, n: int) -> np.ndarray:
    return reverse_values(values, n) ^ np.uint64(full_mask(n))


class PosetTable:
    """The lattice D_n listed in ascending integer order.

    ``values`` is a read-only uint64 array; element positions are the
    indices used by every derived table.
    """

    def __init__(self, n: int, values: np.ndarray):
        self.n = n
        self.values = np.asarray(values, dtype=np.uint64)
        self.values.setflags(write=False)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Mbf:
        return Mbf(int(self.values[i]), self.n)

    def __iter__(self):
        n = self.n
        return (Mbf(int(v), n) for v in self.values)

    def __contains__(self, x: Mbf) -> bool:
        if x.n != self.n:
            return False
        i = int(np.searchsorted(self.values, np.uint64(x.value)))
        return i < len(self.values) and int(self.values[i]) == x.value

    @property
    def bottom(self) -> Mbf:
        return Mbf(0, self.n)

    @property
    def top(self) -> Mbf:
        return Mbf(full_mask(self.n), self.n)

    def index(self, x: Mbf | int) -> int:
        """Position of ``x``; raises ``KeyError`` if ``x`` is not in the lattice."""
        if isinstance(x, Mbf):
            if x.n != self.n:
                raise ArityMismatchError(f"arity {x.n} vs table arity {self.n}")
            x = x.value
        i = int(np.searchsorted(self.values, np.uint64(x)))
        if i >= len(self.values) or int(self.values[i]) != x:
            raise KeyError(f"{x} is not an element of D_{self.n}")
        return i

    def indices(self, values: np.ndarray) -> np.ndarray:
        """Vectorized :meth:`index`; every entry of ``values`` must be present."""
        values = np.asarray(values, dtype=np.uint64)
        idx = np.searchsorted(self.values, values)
        if values.size and (idx.max() >= len(self.values) or np.any(self.values[idx] != values)):
            raise KeyError("some values are not elements of the lattice")
        return idx.astype(np.int64)

    def mbfs(self, idx: Iterable[int]) -> list[Mbf]:
        return [self[int(i)] for i in idx]

    def strings(self, idx: Iterable[int] | None = None) -> list[str]:
        if idx is None:
            idx = range(len(self))
        return [self[int(i)].bits for i in idx]

    def dual_indices(self) -> np.ndarray:
        return self.indices(dual_values(self.values, self.n))

    def leq_mask(self, x: Mbf | int, *, above: bool) -> np.ndarray:
        """Boolean mask of elements ``>= x`` (``above``) or ``<= x``."""
        v = np.uint64(x.value if isinstance(x, Mbf) else x)
        if above:
            return (self.values & v) == v
        return (self.values & ~v) == 0

    def leq_matrix(self) -> np.ndarray:
        """Dense order matrix, ``M[i, j]`` true iff element i <= element j."""
        if self.n > 4:
            raise ResourceLimitError("dense order matrix is limited to n <= 4")
        v = self.values
        return (v[:, None] & ~v[None, :]) == 0


def enumerate_lattice(n: int) -> PosetTable:
    """All monotone functions of ``n`` variables, ascending.

    Built from D_{n-1} as the concatenations ``g0 * g1`` with ``g0 <= g1``;
    since ``g0`` occupies the high half, walking ``g0`` in ascending order and
    appending each ascending upset block yields a sorted result directly.
    """
    if n < 0:
        raise ValueError("arity must be nonnegative")
    if n > MAX_ARITY:
        raise ResourceLimitError(f"D_{n} cannot be materialized (limit n <= {MAX_ARITY})")
    level = np.array([0, 1], dtype=np.uint64)
    for k in range(1, n + 1):
        shift = np.uint64(width(k - 1))
        blocks = [(g0 << shift) | level[(level & g0) == g0] for g0 in level]
        level = np.concatenate(blocks)
    return PosetTable(n, level)
