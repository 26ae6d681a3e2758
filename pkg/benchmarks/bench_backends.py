"""Time the numba kernels against the numpy fallback on the same inputs.

    python benchmarks/bench_backends.py [--repeat 3] [--large]

Each row runs one kernel on both backends, checks the outputs agree, and
prints the best wall time of ``--repeat`` runs. The first numba call
compiles (or loads from the on-disk cache), so it is excluded. ``--large``
adds the n = 6 orbit sweep and a bigger F slice.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from dedekind.engines import KernelContext
from dedekind.kernels import _nb, _np
from dedekind.symmetry import perm_action


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases(large):
    c4, c5 = KernelContext.build(4), KernelContext.build(5)
    c2_, c3_, c4_ = c4.offsets
    act5 = perm_action(5)
    yield "orbit sweep n=5", lambda m: m.orbit_sweep(c5.values, act5.tables)
    if large:
        c6 = KernelContext.build(6, with_orbits=False)
        act6 = perm_action(6)
        yield "orbit sweep n=6", lambda m: m.orbit_sweep(c6.values, act6.tables)
    yield "down split n=5", lambda m: m.down_split(c4.values, c4.down.counts, c5.values, 16)
    yield "up4 table n=4", lambda m: m.up4_table(c4.R, c4.join_idx, c2_, c3_, c4_)
    reps = c4.require_orbits().reps
    every = np.arange(len(c4.table))
    yield "H reduced sum base 4", lambda m: m.h_rep_sums(
        reps, every, c4.join_idx, c4.meet_idx, c4.down.counts, c4.up3, c2_, c3_)
    ec = c4.ecomp(2)
    a = np.repeat(c4.require_orbits().reps[np.isin(c4.require_orbits().reps, ec)], len(ec))
    b = np.tile(ec, len(a) // len(ec))
    yield "F reduced sum base 4, m=2", lambda m: m.f_pair_sums(
        a, b, ec, c4.join_idx, c4.dual_idx, c4.up4, c2_, c3_, c4_)
    if large:
        ec3 = c4.ecomp(3)
        k = 8
        yield f"F slice base 4, m=3 ({k} outer pairs)", lambda m: m.f_pair_sums(
            np.full(k, ec3[0]), ec3[:k], ec3, c4.join_idx, c4.dual_idx, c4.up4, c2_, c3_, c4_)
    r5 = c5.values[c5.require_orbits().reps]
    yield "G exact sum base 5", lambda m: m.g_rep_sums(r5, c5.values, c5.values, c5.up, c5.down.counts)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--large", action="store_true")
    args = parser.parse_args()

    print(f"{'kernel':42s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fn in cases(args.large):
        fn(_nb)  # compile / load cache
        t_nb, out_nb = best_of(lambda: fn(_nb), args.repeat)
        t_np, out_np = best_of(lambda: fn(_np), max(1, args.repeat // 3))
        if not same(out_nb, out_np):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:42s} {t_nb:9.4f}s {t_np:9.4f}s {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
