"""Reproduction suites behind ``ddk verify``.

``quick``  -- published tables for n <= 5, seconds.
``paper``  -- every published value reachable on a workstation, including the
              reduced H sums at base 4 and the reduced F sums for m = 2, 4;
              a few minutes.
``oracle`` -- kernels and tables against brute-force definitions at n <= 3.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from . import congruence as C
from . import engines as E
from . import oracles
from .intervals import build_down_table, interval_count, lattice
from .mbf import Mbf
from .symmetry import build_orbits, canonical, no_symmetry_count

SUITES = ("quick", "paper", "oracle")


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    got: object
    seconds: float

    @property
    def ok(self) -> bool:
        return self.expected == self.got


Job = tuple[str, object, Callable[[], object]]


class _Contexts:
    def __init__(self, store=None, budget=E.DEFAULT_BUDGET, progress=None):
        self.store, self.budget, self.progress = store, budget, progress
        self._ctx: dict[int, E.KernelContext] = {}

    def __call__(self, n: int) -> E.KernelContext:
        if n not in self._ctx:
            self._ctx[n] = E.KernelContext.build(n, store=self.store, budget=self.budget, progress=self.progress)
        return self._ctx[n]


def _quick(ctx: _Contexts, top: int = 5) -> Iterator[Job]:
    for n in range(top + 1):
        yield f"d_{n} by enumeration", C.DEDEKIND[n], lambda n=n: len(lattice(n))
        yield f"r_{n}", C.CLASSES[n], lambda n=n: ctx(n).require_orbits().r
        yield f"lambda_{n}", C.SELF_DUAL[n], lambda n=n: E.selfdual_count(ctx(n))
    for n in range(min(top, 5) + 1):
        yield f"|D_{n}^P4|", C.CHAIN4[n], lambda n=n: E.p4_count(ctx(n))
    yield "R_4 orbit size histogram", C.R4_GAMMA, lambda: ctx(4).require_orbits().histogram()
    yield "no-symmetry classes n=5", C.NO_SYMMETRY[5], lambda: no_symmetry_count(ctx(5).require_orbits())
    yield "G table over D_2", C.G_TABLE_D2, lambda: _g_table(ctx(2))
    yield "G over E^c_{2,2}", C.G2_SUM_BASE2_MOD2, lambda: E.residue_via_g(ctx(2), 2).sum
    for n in range(0, 4):
        yield f"d_{n + 2} via G", C.DEDEKIND[n + 2], lambda n=n: E.d_via_g(ctx(n))
        yield f"d_{n + 3} via H", C.DEDEKIND[n + 3], lambda n=n: E.d_via_h(ctx(n))
    for n in range(0, 3):
        yield f"d_{n + 4} via F", C.DEDEKIND[n + 4], lambda n=n: E.d_via_f(ctx(n))
    yield "M(D_1)^3", C.CUBE_D1, lambda: _as_tuple(E.matrix_cube(ctx(1)))
    yield "M(D_2)^3", C.CUBE_D2, lambda: _as_tuple(E.matrix_cube(ctx(2)))
    yield "d_9 mod 210 by CRT", (210, 6), lambda: C.crt_combine(C.D9_RESIDUES.items())


def _paper(ctx: _Contexts) -> Iterator[Job]:
    yield from _quick(ctx, top=6)
    yield "no-symmetry classes n=6", C.NO_SYMMETRY[6], lambda: no_symmetry_count(ctx(6).require_orbits())
    yield "d_7 via G", C.DEDEKIND[7], lambda: E.d_via_g(ctx(5))
    yield "d_7 via H", C.DEDEKIND[7], lambda: E.d_via_h(ctx(4))
    yield "d_7 via F", C.DEDEKIND[7], lambda: E.d_via_f(ctx(3))
    for m, s in C.H3_SUMS_BASE4.items():
        yield f"reduced H sum, base 4, m={m}", s, lambda m=m: E.residue_via_h(ctx(4), m).sum
    for m in (2, 4):
        yield f"reduced F sum, base 4, m={m}", C.F4_SUMS_BASE4[m], lambda m=m: E.residue_via_f(ctx(4), m).sum


def _oracle(ctx: _Contexts, seed: int = 0) -> Iterator[Job]:
    rng = random.Random(seed)
    for n in range(5):
        yield f"D_{n} vs exhaustive test", oracles.monotone_strings(n), lambda n=n: [int(v) for v in lattice(n).values]
    for n in range(4):
        yield f"all intervals in D_{n}", True, lambda n=n: _intervals_ok(n)
        yield f"down table D_{n}", True, lambda n=n: _down_ok(n)
        yield f"canonical forms D_{n}", True, lambda n=n: _canon_ok(ctx(n))
    for n in range(3):
        yield f"G kernel D_{n}", True, lambda n=n: _kernel_ok(ctx(n), 2, E.g_pair, oracles.g_oracle, rng)
        yield f"H kernel D_{n}", True, lambda n=n: _kernel_ok(ctx(n), 3, E.h_triple, oracles.h_oracle, rng)
        yield f"H' kernel D_{n}", True, lambda n=n: _kernel_ok(ctx(n), 3, E.h_prime, oracles.h_prime_oracle, rng)
        yield f"4-chains D_{n}", oracles.chain_oracle(n, 4), lambda n=n: E.p4_count(ctx(n))
    for n in range(2):
        yield f"F kernel D_{n}", True, lambda n=n: _kernel_ok(ctx(n), 6, E.f_six, oracles.f_oracle, rng, 40)
    for n, k in ((0, 3), (1, 2), (1, 3), (2, 2)):
        yield f"maps B^{k} -> D_{n}", len(lattice(n + k)), lambda n=n, k=k: oracles.cube_maps(k, n)


def _g_table(ctx: E.KernelContext) -> tuple:
    els = list(ctx.table)
    return tuple(tuple(E.g_pair(x, y, ctx) for y in els) for x in els)


def _as_tuple(a: np.ndarray) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in a)


def _intervals_ok(n: int) -> bool:
    t = lattice(n)
    els = list(t)
    return all(interval_count(x, y, t) == oracles.interval_oracle(x, y) for x in els for y in els)


def _down_ok(n: int) -> bool:
    t = lattice(n)
    down = build_down_table(t)
    bot = Mbf.bottom(n)
    return all(int(down.counts[i]) == oracles.interval_oracle(bot, x) for i, x in enumerate(t))


def _canon_ok(ctx: E.KernelContext) -> bool:
    orb = ctx.require_orbits()
    return all(
        oracles.canonical_oracle(x) == canonical(x) == orb.canonical_of(x) for x in ctx.table
    ) and sum(int(g) for g in orb.gamma) == len(ctx.table) and all(math.factorial(ctx.n) % int(g) == 0 for g in orb.gamma)


def _kernel_ok(ctx, arity, kernel, oracle, rng, samples=60) -> bool:
    els = list(ctx.table)
    total = len(els) ** arity
    if total <= samples:
        cases = itertools.product(els, repeat=arity)
    else:
        cases = (tuple(rng.choice(els) for _ in range(arity)) for _ in range(samples))
    return all(kernel(*args, ctx) == oracle(*args) for args in cases)


def run(suite: str, *, store=None, budget: int = E.DEFAULT_BUDGET, progress=None,
        on_check: Callable[[Check], None] | None = None) -> list[Check]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    ctx = _Contexts(store, budget, progress)
    jobs = {"quick": _quick, "paper": _paper, "oracle": _oracle}[suite](ctx)
    results = []
    for name, expected, fn in jobs:
        t0 = time.perf_counter()
        got = fn()
        check = Check(name, expected, got, time.perf_counter() - t0)
        results.append(check)
        if on_check is not None:
            on_check(check)
    return results
