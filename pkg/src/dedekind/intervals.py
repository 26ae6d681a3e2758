"""Interval counts ``re(x, y) = |{z : x <= z <= y}|`` in D_n."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import ArityMismatchError, ResourceLimitError
from .mbf import MAX_ARITY, Mbf, PosetTable, dual, enumerate_lattice, leq, width


@dataclass(frozen=True)
class DownTable:
    """``counts[i] = re(bottom, element i)``, aligned with ``table``."""

    table: PosetTable
    counts: np.ndarray

    @property
    def n(self) -> int:
        return self.table.n

    def __getitem__(self, x: Mbf) -> int:
        return int(self.counts[self.table.index(x)])

    def up_counts(self) -> np.ndarray:
        """``re(x, top)`` for every element, via the dual."""
        return self.counts[self.table.dual_indices()]


def _check(x: Mbf, y: Mbf, table: PosetTable) -> None:
    if x.n != y.n or x.n != table.n:
        raise ArityMismatchError(f"arities {x.n}, {y.n} vs table {table.n}")


@lru_cache(maxsize=None)
def lattice(n: int) -> PosetTable:
    return enumerate_lattice(n)


def build_down_table(table: PosetTable, orbits=None) -> DownTable:
    """Down-counts through the half split
    ``re(bot, x0*x1) = sum over z1 <= x1 of re(bot, x0 & z1)`` taken in D_{n-1}.

    At n = 6 the count is evaluated only on orbit representatives and copied
    across each orbit (the count is permutation invariant); pass ``orbits`` to
    reuse an existing orbit table.
    """
    n = table.n
    if n > MAX_ARITY:
        raise ResourceLimitError(f"down tables are limited to n <= {MAX_ARITY}")
    if n == 0:
        counts = np.array([1, 2], dtype=np.int64)
    else:
        prev = lattice(n - 1)
        prev_down = build_down_table(prev).counts
        half = width(n - 1)
        if n < MAX_ARITY:
            counts = kernels.down_split(prev.values, prev_down, table.values, half)
        else:
            if orbits is None:
                from .symmetry import build_orbits

                orbits = build_orbits(table)
            rep_counts = kernels.down_split(prev.values, prev_down, orbits.rep_values, half)
            counts = rep_counts[orbits.class_id]
    counts = np.asarray(counts, dtype=np.int64)
    counts.setflags(write=False)
    return DownTable(table, counts)


def up_count(x: Mbf, down: DownTable) -> int:
    """``re(x, top)``, read as ``re(bot, dual(x))``."""
    return down[dual(x)]


def upset(x: Mbf, table: PosetTable) -> list[Mbf]:
    if x.n != table.n:
        raise ArityMismatchError(f"arity {x.n} vs table {table.n}")
    return table.mbfs(np.flatnonzero(table.leq_mask(x, above=True)))


def downset(x: Mbf, table: PosetTable) -> list[Mbf]:
    if x.n != table.n:
        raise ArityMismatchError(f"arity {x.n} vs table {table.n}")
    return table.mbfs(np.flatnonzero(table.leq_mask(x, above=False)))


def interval_matrix(table: PosetTable) -> np.ndarray:
    """Dense ``R[i, j] = re(element i, element j)`` for n <= 4."""
    if table.n > 4:
        raise ResourceLimitError("dense interval matrix is limited to n <= 4")
    L = table.leq_matrix().astype(np.int64)
    # paths i <= z <= j
    return L @ L


def interval_row(x: Mbf | int, table: PosetTable) -> np.ndarray:
    """``re(x, s)`` for every element ``s`` (n <= 5)."""
    if table.n > 5:
        raise ResourceLimitError("interval rows are limited to n <= 5")
    v = np.uint64(x.value if isinstance(x, Mbf) else x)
    vals = table.values
    above = vals[(vals & v) == v]
    row = np.zeros(len(vals), dtype=np.int64)
    mask_s = (vals & v) == v
    targets = vals[mask_s]
    # for each s >= x count members of `above` that are <= s
    counts = np.zeros(len(targets), dtype=np.int64)
    step = max(1, (1 << 22) // max(1, len(above)))
    for start in range(0, len(targets), step):
        t = targets[start:start + step]
        counts[start:start + step] = ((above[None, :] & ~t[:, None]) == 0).sum(axis=1)
    row[mask_s] = counts
    return row


def interval_count(x: Mbf, y: Mbf, table: PosetTable) -> int:
    """Exact ``re(x, y)``; zero unless ``x <= y``.

    Scans the table for n <= 5; at n = 6 splits both ends into halves and sums
    ``re(x0, y0 & z1)`` over ``z1`` in ``[x1, y1]`` of D_5.
    """
    _check(x, y, table)
    if not leq(x, y):
        return 0
    if table.n <= 5:
        vals = table.values
        lo, hi = np.uint64(x.value), np.uint64(y.value)
        return int(np.count_nonzero(((vals & lo) == lo) & ((vals & ~hi) == 0)))
    return _interval_split(x, y)


@lru_cache(maxsize=256)
def _row5(x0: int) -> np.ndarray:
    return interval_row(x0, lattice(5))


def _interval_split(x: Mbf, y: Mbf) -> int:
    (x0, x1), (y0, y1) = x.halves(), y.halves()
    sub = lattice(x.n - 1)
    vals = sub.values
    lo, hi = np.uint64(x1.value), np.uint64(y1.value)
    z1 = vals[((vals & lo) == lo) & ((vals & ~hi) == 0)]
    row = _row5(x0.value)
    return int(row[sub.indices(np.uint64(y0.value) & z1)].sum())
