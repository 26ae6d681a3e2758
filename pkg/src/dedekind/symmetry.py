"""Variable permutations acting on D_n, orbits and orbit sizes.

A permutation is a tuple ``pi`` of ``range(n)``; it sends a point ``x`` of
the cube to ``x o pi`` (coordinate ``j`` of the image is ``x[pi[j]]``) and a
function ``g`` to ``g o pi``.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ArityMismatchError, ResourceLimitError
from .mbf import MAX_ARITY, Mbf, PosetTable, point_of, point_index, width


class PermAction:
    """Precomputed bit remappings for every permutation of ``n`` variables.

    ``maps[p, i]`` is the source character of target character ``i``.
    ``tables[p, b, v]`` is the image contribution of byte ``b`` (of the
    integer form) holding ``v``; OR-ing one lookup per byte applies the
    permutation to a whole word.
    """

    def __init__(self, n: int):
        if n > MAX_ARITY:
            raise ResourceLimitError(f"permutation tables are limited to n <= {MAX_ARITY}")
        self.n = n
        self.perms = list(itertools.permutations(range(n)))
        w = width(n)
        maps = np.empty((len(self.perms), w), dtype=np.int64)
        for p, pi in enumerate(self.perms):
            for i in range(w):
                x = point_of(i, n)
                maps[p, i] = point_index([x[pi[j]] for j in range(n)])
        self.maps = maps
        self.tables = _byte_tables(maps, w)

    def __len__(self) -> int:
        return len(self.perms)

    def perm_id(self, pi: Sequence[int]) -> int:
        return self.perms.index(tuple(pi))

    def images(self, g: Mbf) -> list[Mbf]:
        """``pi(g)`` for every permutation, by gathering bits."""
        if g.n != self.n:
            raise ArityMismatchError(f"arity {g.n} vs action arity {self.n}")
        bits = np.array([int(c) for c in g.bits], dtype=np.int64)
        out = []
        for row in bits[self.maps]:
            out.append(Mbf(int("".join(map(str, row)), 2), self.n))
        return out

    def apply_values(self, p: int, values: np.ndarray) -> np.ndarray:
        return kernels.permute_values(values, self.tables, p)


def _byte_tables(maps: np.ndarray, w: int) -> np.ndarray:
    n_perm = maps.shape[0]
    n_bytes = (w + 7) // 8
    # integer bit q of the source lands on integer bit dest[p, q] of the image
    dest = np.empty((n_perm, w), dtype=np.int64)
    rows = np.arange(n_perm)[:, None]
    dest[rows, w - 1 - maps] = w - 1 - np.arange(w)[None, :]
    weight = np.zeros((n_perm, 8 * n_bytes), dtype=np.uint64)
    weight[:, :w] = np.left_shift(np.uint64(1), dest.astype(np.uint64))
    vbits = ((np.arange(256)[:, None] >> np.arange(8)[None, :]) & 1).astype(np.uint64)
    tables = np.zeros((n_perm, n_bytes, 256), dtype=np.uint64)
    for b in range(n_bytes):
        # distinct target bits, so the sum is the OR
        tables[:, b, :] = (vbits[None, :, :] * weight[:, None, 8 * b:8 * b + 8]).sum(axis=2)
    return tables


@lru_cache(maxsize=None)
def perm_action(n: int) -> PermAction:
    return PermAction(n)


def apply_perm(pi: Sequence[int], g: Mbf) -> Mbf:
    pi = tuple(pi)
    if sorted(pi) != list(range(g.n)):
        raise ArityMismatchError(f"{pi} is not a permutation of {g.n} variables")
    w = width(g.n)
    bits = g.bits
    out = []
    for i in range(w):
        x = point_of(i, g.n)
        out.append(bits[point_index([x[pi[j]] for j in range(g.n)])])
    return Mbf(int("".join(out), 2), g.n)


def canonical(g: Mbf, action: PermAction | None = None) -> Mbf:
    """Smallest image of ``g`` in integer order, by trying every permutation."""
    action = action or perm_action(g.n)
    return min(action.images(g), key=lambda h: h.value)


@dataclass(frozen=True)
class OrbitTable:
    """Orbit decomposition of D_n, keyed by element position.

    ``class_id[i]`` is the class of element ``i``; ``reps`` holds the position
    of each class's canonical (smallest) member, ascending; ``gamma`` the class
    sizes aligned with ``reps``.
    """

    table: PosetTable
    class_id: np.ndarray
    reps: np.ndarray
    gamma: np.ndarray

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def r(self) -> int:
        return len(self.reps)

    @property
    def rep_values(self) -> np.ndarray:
        return self.table.values[self.reps]

    @property
    def canon(self) -> np.ndarray:
        return self.table.values[self.reps[self.class_id]]

    def gamma_of_elements(self) -> np.ndarray:
        return self.gamma[self.class_id]

    def gamma_of(self, x: Mbf) -> int:
        return int(self.gamma[self.class_id[self.table.index(x)]])

    def canonical_of(self, x: Mbf) -> Mbf:
        return self.table[int(self.reps[self.class_id[self.table.index(x)]])]

    def histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(int(g) for g in self.gamma).items()))

    def rep_positions(self, members: np.ndarray) -> np.ndarray:
        """Which of ``reps`` are in the sorted element-index set ``members``."""
        return self.reps[np.isin(self.reps, members)]


def build_orbits(table: PosetTable, action: PermAction | None = None) -> OrbitTable:
    """Sweep the table in ascending order; the first unclassified element met
    is the minimum of its orbit, so it becomes the representative and all its
    images are classified at once."""
    if table.n > MAX_ARITY:
        raise ResourceLimitError(f"orbits are limited to n <= {MAX_ARITY}")
    action = action or perm_action(table.n)
    class_id, reps, gamma = kernels.orbit_sweep(table.values, action.tables)
    for arr in (class_id, reps, gamma):
        arr.setflags(write=False)
    return OrbitTable(table, class_id, reps, gamma)


def e_complement(orbits: OrbitTable, m: int) -> np.ndarray:
    """Sorted positions of elements whose orbit size is not divisible by ``m``."""
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return np.flatnonzero(orbits.gamma_of_elements() % m != 0)


def e_set(orbits: OrbitTable, m: int) -> np.ndarray:
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return np.flatnonzero(orbits.gamma_of_elements() % m == 0)


def no_symmetry_count(orbits: OrbitTable) -> int:
    """Classes whose orbit is as large as the whole symmetric group."""
    if orbits.n < 1:
        raise ValueError("needs at least one variable")
    return int(np.count_nonzero(orbits.gamma == math.factorial(orbits.n)))


def histogram_csv(orbits: OrbitTable) -> str:
    lines = ["gamma,classes"]
    lines += [f"{k},{v}" for k, v in orbits.histogram().items()]
    return "\n".join(lines) + "\n"
