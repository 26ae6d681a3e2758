"""Counting kernels and the exact / modular Dedekind number sums built on them.

Writing D_{n+k} as the monotone maps from the cube B^k into D_n, each kernel
counts the ways a partial assignment extends to a full monotone map:

* ``g_pair``  -- B^2, the two middle points fixed,
* ``h_triple`` -- B^3, the three weight-one points fixed,
* ``h_prime`` -- the six-point poset a < b < {c, d, e} < f with c, d, e fixed,
* ``f_six``   -- B^4, the six weight-two points fixed.

The engine sums iterate orbit representatives weighted by orbit size, and
for a modulus ``m`` restrict every coordinate to elements whose orbit size is
not divisible by ``m``; the resulting sum is congruent to the full one.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import kernels
from .errors import ArityMismatchError, BudgetExceededError, ResourceLimitError
from .intervals import DownTable, build_down_table, interval_matrix, interval_row, lattice
from .mbf import Mbf, PosetTable, dual, dual_values
from .symmetry import OrbitTable, build_orbits, e_complement

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**10
METHODS = ("G2", "H3", "F4", "P4MOD3", "LAMBDA2")
# F sums above this many terms are reported as long running
LONG_RUNNING = 10**9


@dataclass
class KernelContext:
    """Everything the kernels read for one base arity ``n``."""

    table: PosetTable
    down: DownTable
    orbits: OrbitTable | None = None
    budget: int = DEFAULT_BUDGET
    progress: Callable[[str, int, int], None] | None = None
    _pairs_below: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.down.n != self.table.n:
            raise ArityMismatchError("down table and poset table differ in arity")
        if self.orbits is not None and self.orbits.n != self.table.n:
            raise ArityMismatchError("orbit table and poset table differ in arity")

    @classmethod
    def build(cls, n: int, *, with_orbits: bool = True, store=None, **kw) -> "KernelContext":
        if store is not None:
            table = store.table(n)
            orbits = store.orbits(n) if with_orbits or n == 6 else None
            down = store.down(n)
        else:
            table = lattice(n)
            orbits = build_orbits(table) if with_orbits or n == 6 else None
            down = build_down_table(table, orbits)
        return cls(table, down, orbits if with_orbits else None, **kw)

    @property
    def n(self) -> int:
        return self.table.n

    @property
    def values(self) -> np.ndarray:
        return self.table.values

    def require_orbits(self) -> OrbitTable:
        if self.orbits is None:
            self.orbits = build_orbits(self.table)
        return self.orbits

    def ecomp(self, m: int) -> np.ndarray:
        return e_complement(self.require_orbits(), m)

    def check_budget(self, what: str, count: int) -> None:
        if count > self.budget:
            raise BudgetExceededError(what, count, self.budget)
        if count > LONG_RUNNING:
            log.warning("%s: %s kernel evaluations, this will take a while", what, f"{count:,}")

    def report(self, what: str, done: int, total: int) -> None:
        if self.progress is not None:
            self.progress(what, done, total)

    # -- lazily built dense structures --------------------------------------

    @cached_property
    def up(self) -> np.ndarray:
        return self.down.up_counts()

    @cached_property
    def dual_idx(self) -> np.ndarray:
        return self.table.dual_indices()

    def _dense(self, what: str) -> None:
        if self.n > 4:
            raise ResourceLimitError(f"{what} needs dense tables, available for base arity <= 4")

    @cached_property
    def join_idx(self) -> np.ndarray:
        self._dense("join table")
        v = self.values
        return self.table.indices((v[:, None] | v[None, :]).ravel()).reshape(len(v), len(v))

    @cached_property
    def meet_idx(self) -> np.ndarray:
        self._dense("meet table")
        v = self.values
        return self.table.indices((v[:, None] & v[None, :]).ravel()).reshape(len(v), len(v))

    @cached_property
    def R(self) -> np.ndarray:
        self._dense("interval matrix")
        return interval_matrix(self.table)

    @cached_property
    def offsets(self):
        return kernels.multiset_offsets(len(self.table))

    @cached_property
    def up3(self) -> np.ndarray:
        c2, c3, _ = self.offsets
        return kernels.up3_table(self.R, self.join_idx, c2, c3)

    @cached_property
    def up4(self) -> np.ndarray:
        c2, c3, c4 = self.offsets
        return kernels.up4_table(self.R, self.join_idx, c2, c3, c4)

    # -- scalar helpers -------------------------------------------------------

    def idx(self, x: Mbf) -> int:
        return self.table.index(x)

    def down_of(self, x: Mbf) -> int:
        return int(self.down.counts[self.idx(x)])

    def up_of(self, x: Mbf) -> int:
        return int(self.up[self.idx(x)])

    def row(self, x: Mbf) -> np.ndarray:
        """``re(x, s)`` over all ``s``."""
        if self.n <= 4:
            return self.R[self.idx(x)]
        return interval_row(x, self.table)

    def pairs_below(self, t: Mbf) -> int:
        """``sum over s <= t of re(s, t)``, memoized per argument."""
        key = t.value
        if key not in self._pairs_below:
            mask = self.table.leq_mask(t, above=False)
            self._pairs_below[key] = int(self.down.counts[mask].sum())
        return self._pairs_below[key]


@dataclass(frozen=True)
class ResidueWitness:
    target: int
    modulus: int
    method: str
    sum: int
    residue: int
    base_arity: int
    elapsed_ms: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method tag {self.method!r}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError("residue out of range")

    def to_dict(self) -> dict:
        return {
            "target": str(self.target),
            "modulus": str(self.modulus),
            "method": self.method,
            "sum": str(self.sum),
            "residue": str(self.residue),
            "base_arity": str(self.base_arity),
            "elapsed_ms": str(self.elapsed_ms),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ResidueWitness":
        ints = {k: int(d[k]) for k in ("target", "modulus", "sum", "residue", "base_arity", "elapsed_ms")}
        return cls(method=d["method"], **ints)


def _witness(ctx, target, m, method, total, t0) -> ResidueWitness:
    return ResidueWitness(
        target=target,
        modulus=m,
        method=method,
        sum=total,
        residue=total % m,
        base_arity=ctx.n,
        elapsed_ms=int((time.perf_counter() - t0) * 1000),
    )


def _check_modulus(m: int) -> None:
    if m < 2:
        raise ValueError("modulus must be at least 2")


def _same(ctx: KernelContext, *xs: Mbf) -> None:
    for x in xs:
        if x.n != ctx.n:
            raise ArityMismatchError(f"arity {x.n} vs context arity {ctx.n}")


def _combine(parts, weights, m: int | None = None) -> int:
    total = 0
    for p, w in zip(parts, weights):
        total += int(w) * p
        if m is not None:
            total %= m
    return total


# -- G: maps from B^2 ---------------------------------------------------------

def g_pair(x: Mbf, y: Mbf, ctx: KernelContext) -> int:
    """``re(x|y, top) * re(bot, x&y)``."""
    _same(ctx, x, y)
    return ctx.up_of(Mbf(x.value | y.value, x.n)) * ctx.down_of(Mbf(x.value & y.value, x.n))


def _g_sum(ctx, rep_pos, gam, Y, what, m=None):
    ctx.check_budget(what, len(rep_pos) * len(Y))
    parts = []
    chunk = max(1, min(len(rep_pos), 64))
    for start in range(0, len(rep_pos), chunk):
        sl = slice(start, start + chunk)
        parts += kernels.g_rep_sums(ctx.values[rep_pos[sl]], Y, ctx.values, ctx.up, ctx.down.counts)
        ctx.report(what, min(start + chunk, len(rep_pos)), len(rep_pos))
    return _combine(parts, gam, m)


def d_via_g(ctx: KernelContext) -> int:
    """d_{n+2} as the sum over representatives x of gamma(x) * G({x} x D_n)."""
    orb = ctx.require_orbits()
    return _g_sum(ctx, orb.reps, orb.gamma, ctx.values, f"G2 exact d_{ctx.n + 2}")


def residue_via_g(ctx: KernelContext, m: int, *, reduce: bool = False) -> ResidueWitness:
    _check_modulus(m)
    t0 = time.perf_counter()
    orb = ctx.require_orbits()
    ec = ctx.ecomp(m)
    keep = orb.gamma % m != 0
    total = _g_sum(ctx, orb.reps[keep], orb.gamma[keep], ctx.values[ec],
                   f"G2 d_{ctx.n + 2} mod {m}", m if reduce else None)
    return _witness(ctx, ctx.n + 2, m, "G2", total, t0)


# -- H: maps from B^3 ---------------------------------------------------------

def h_triple(x: Mbf, y: Mbf, z: Mbf, ctx: KernelContext) -> int:
    """``re(bot, x&y&z) * sum over s of re(x|y, s) re(x|z, s) re(y|z, s)``."""
    _same(ctx, x, y, z)
    n = x.n
    low = ctx.down_of(Mbf(x.value & y.value & z.value, n))
    rows = [ctx.row(Mbf(a | b, n)) for a, b in ((x.value, y.value), (x.value, z.value), (y.value, z.value))]
    # rows vanish unless s lies above the join, so no explicit bound is needed
    return low * int(np.sum(rows[0] * rows[1] * rows[2]))


def h_prime(u: Mbf, v: Mbf, w: Mbf, ctx: KernelContext) -> int:
    """Extensions over the poset a < b < {c, d, e} < f with c, d, e = u, v, w."""
    _same(ctx, u, v, w)
    n = u.n
    return ctx.pairs_below(Mbf(u.value & v.value & w.value, n)) * ctx.up_of(Mbf(u.value | v.value | w.value, n))


def d_via_h(ctx: KernelContext) -> int:
    """d_{n+3} = diag + 3 * (repeated pairs) + 6 * (strict triples), by
    invariance of H under argument permutations."""
    diag, pair, strict = h_buckets(ctx)
    return diag + 3 * pair + 6 * strict


def h_buckets(ctx: KernelContext) -> tuple[int, int, int]:
    N = len(ctx.table)
    ctx.check_budget(f"H3 exact d_{ctx.n + 3}", N * (N + 1) * (N + 2) // 6)
    c2, c3, _ = ctx.offsets
    return kernels.h_buckets(ctx.join_idx, ctx.meet_idx, ctx.down.counts, ctx.up3, c2, c3)


def _h_sum(ctx, rep_pos, gam, E, what, m=None):
    ctx.check_budget(what, len(rep_pos) * len(E) ** 2)
    c2, c3, _ = ctx.offsets
    E = np.asarray(E, dtype=np.int64)
    parts = kernels.h_rep_sums(np.asarray(rep_pos, dtype=np.int64), E, ctx.join_idx, ctx.meet_idx,
                               ctx.down.counts, ctx.up3, c2, c3)
    return _combine(parts, gam, m)


def d_via_h_reduced(ctx: KernelContext) -> int:
    """d_{n+3} as the orbit-weighted sum over representatives."""
    orb = ctx.require_orbits()
    return _h_sum(ctx, orb.reps, orb.gamma, np.arange(len(ctx.table)), f"H3 reduced d_{ctx.n + 3}")


def residue_via_h(ctx: KernelContext, m: int, *, reduce: bool = False) -> ResidueWitness:
    _check_modulus(m)
    t0 = time.perf_counter()
    orb = ctx.require_orbits()
    keep = orb.gamma % m != 0
    total = _h_sum(ctx, orb.reps[keep], orb.gamma[keep], ctx.ecomp(m),
                   f"H3 d_{ctx.n + 3} mod {m}", m if reduce else None)
    return _witness(ctx, ctx.n + 3, m, "H3", total, t0)


def h_prime_buckets(ctx: KernelContext) -> tuple[int, int, int]:
    """(diag, repeated pairs, strict triples) of H' over D_n, n <= 2 check."""
    if ctx.n > 2:
        raise ResourceLimitError("the H' bucket check is limited to n <= 2")
    els = list(ctx.table)
    diag = sum(h_prime(u, u, u, ctx) for u in els)
    pair = strict = 0
    for i, u in enumerate(els):
        for j in range(i + 1, len(els)):
            v = els[j]
            pair += h_prime(u, u, v, ctx) + h_prime(u, v, v, ctx)
            for k in range(j + 1, len(els)):
                strict += h_prime(u, v, els[k], ctx)
    return diag, pair, strict


# -- F: maps from B^4 ---------------------------------------------------------

def _upper_factor(joins: list[Mbf], ctx: KernelContext) -> int:
    # four factors of up to d_5 overflow int64 at n = 5
    prod = np.ones(len(ctx.table), dtype=np.int64 if ctx.n <= 4 else object)
    for j in joins:
        prod = prod * ctx.row(j)
    return int(prod.sum())


def f_six(a: Mbf, b: Mbf, c: Mbf, d: Mbf, e: Mbf, f: Mbf, ctx: KernelContext) -> int:
    """Extensions of a B^4 -> D_n assignment of the weight-two points
    0011, 0101, 1001, 0110, 1010, 1100 (in that argument order)."""
    _same(ctx, a, b, c, d, e, f)
    if ctx.n > 5:
        raise ResourceLimitError("f_six is limited to base arity <= 5")
    n = a.n
    J = lambda *xs: Mbf(xs[0].value | xs[1].value | xs[2].value, n)  # noqa: E731
    M = lambda *xs: Mbf(xs[0].value & xs[1].value & xs[2].value, n)  # noqa: E731
    upper = _upper_factor([J(a, b, d), J(a, c, e), J(b, c, f), J(d, e, f)], ctx)
    # lower extensions of g are upper extensions of the dual assignment
    lower = _upper_factor([dual(M(a, b, c)), dual(M(a, d, e)), dual(M(b, d, f)), dual(M(c, e, f))], ctx)
    return upper * lower


def _f_sum(ctx, rep_pos, gam, E, what, m=None):
    E = np.asarray(E, dtype=np.int64)
    ctx.check_budget(what, len(rep_pos) * len(E) ** 5)
    c2, c3, c4 = ctx.offsets
    T4 = ctx.up4
    outer_a = np.repeat(np.asarray(rep_pos, dtype=np.int64), len(E))
    outer_b = np.tile(E, len(rep_pos))
    weights = np.repeat(np.asarray(gam, dtype=np.int64), len(E))
    n_chunks = min(len(outer_a), 50)
    bounds = np.linspace(0, len(outer_a), n_chunks + 1).astype(int)
    total = 0
    for k in range(n_chunks):
        sl = slice(bounds[k], bounds[k + 1])
        parts = kernels.f_pair_sums(outer_a[sl], outer_b[sl], E, ctx.join_idx, ctx.dual_idx, T4, c2, c3, c4)
        total += _combine(parts, weights[sl], m)
        if m is not None:
            total %= m
        ctx.report(what, k + 1, n_chunks)
    return total


def d_via_f(ctx: KernelContext) -> int:
    """d_{n+4} as the orbit-weighted six-fold sum."""
    orb = ctx.require_orbits()
    return _f_sum(ctx, orb.reps, orb.gamma, np.arange(len(ctx.table)), f"F4 exact d_{ctx.n + 4}")


def residue_via_f(ctx: KernelContext, m: int, *, reduce: bool = False) -> ResidueWitness:
    _check_modulus(m)
    t0 = time.perf_counter()
    orb = ctx.require_orbits()
    keep = orb.gamma % m != 0
    total = _f_sum(ctx, orb.reps[keep], orb.gamma[keep], ctx.ecomp(m),
                   f"F4 d_{ctx.n + 4} mod {m}", m if reduce else None)
    return _witness(ctx, ctx.n + 4, m, "F4", total, t0)


def f_tuple_count(ctx: KernelContext, m: int | None = None) -> int:
    orb = ctx.require_orbits()
    if m is None:
        return orb.r * len(ctx.table) ** 5
    return int(np.count_nonzero(orb.gamma % m)) * len(ctx.ecomp(m)) ** 5


# -- chains ---------------------------------------------------------------------

def p4_count(ctx: KernelContext) -> int:
    """Four-element multichains: sum over b <= c of re(bot, b) * re(c, top)."""
    if ctx.n > 5:
        raise ResourceLimitError("the pair sum is limited to base arity <= 5")
    v = ctx.values
    down, up = ctx.down.counts, ctx.up
    total = 0
    for i in range(len(v)):
        total += int(down[i]) * int(up[(v & v[i]) == v[i]].sum())
    return total


def multichain_count(ctx: KernelContext, length: int) -> int:
    """Chains x_1 <= ... <= x_length, by repeated summation over downsets."""
    if ctx.n > 5:
        raise ResourceLimitError("multichain counting is limited to base arity <= 5")
    if length < 1:
        raise ValueError("length must be positive")
    v = ctx.values
    counts = [1] * len(v)
    for _ in range(length - 1):
        vec = np.array(counts, dtype=object)
        counts = [int(vec[(v & ~x) == 0].sum()) for x in v]
    return sum(counts)


def leq_matrix_int(ctx: KernelContext) -> np.ndarray:
    return ctx.table.leq_matrix().astype(np.int64)


def matrix_cube(ctx: KernelContext) -> np.ndarray:
    if ctx.n > 3:
        raise ResourceLimitError("the dense matrix cube is limited to n <= 3")
    M = leq_matrix_int(ctx)
    return M @ M @ M


def matrix_cube_sum(ctx: KernelContext) -> int:
    return int(matrix_cube(ctx).sum())


def residue_via_p4(ctx: KernelContext) -> ResidueWitness:
    t0 = time.perf_counter()
    return _witness(ctx, ctx.n + 3, 3, "P4MOD3", p4_count(ctx), t0)


# -- self-duality -------------------------------------------------------------

def selfdual_count(ctx: KernelContext) -> int:
    v = ctx.values
    return int(np.count_nonzero(dual_values(v, ctx.n) == v))


def residue_via_selfdual(ctx: KernelContext) -> ResidueWitness:
    t0 = time.perf_counter()
    return _witness(ctx, ctx.n, 2, "LAMBDA2", selfdual_count(ctx), t0)


def direct_count(n: int) -> int:
    """d_n by listing D_n."""
    return len(lattice(n))
