"""Definitional brute-force counts, independent of the kernel formulas.

Everything here works on plain Python integers and small explicit posets, so
it is slow and only meant for tiny arities. The kernels and engines are
checked against these.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .mbf import Mbf, is_monotone, width

# the six-point poset a < b < {c, d, e} < f
POSET_C = ("a", "b", "c", "d", "e", "f")
_C_COVERS = {("a", "b"), ("b", "c"), ("b", "d"), ("b", "e"), ("c", "f"), ("d", "f"), ("e", "f")}


def monotone_strings(n: int) -> list[int]:
    """D_n by testing every Boolean function (n <= 4)."""
    if n > 4:
        raise ValueError("exhaustive testing is limited to n <= 4")
    w = width(n)
    return [v for v in range(1 << w) if is_monotone(format(v, f"0{w}b"))]


def _sub(a: int, b: int) -> bool:
    return a & ~b == 0


def cube_points(k: int) -> list[tuple[int, ...]]:
    # ordered by weight so that every point comes after all points below it
    return sorted(itertools.product((0, 1), repeat=k), key=sum)


def count_extensions(points: Sequence, below: dict, elements: Iterable[int], fixed: dict) -> int:
    """Monotone maps ``points -> elements`` extending ``fixed``.

    ``points`` must be listed so that each point follows everything below it;
    ``below[p]`` holds the points strictly below ``p``.
    """
    elements = list(elements)
    points = list(points)

    def rec(i: int, assign: dict) -> int:
        if i == len(points):
            return 1
        p = points[i]
        lower = [assign[q] for q in below[p]]
        upper_fixed = [fixed[q] for q in points[i + 1:] if q in fixed and p in below[q]]
        cands = [fixed[p]] if p in fixed else elements
        total = 0
        for v in cands:
            if all(_sub(l, v) for l in lower) and all(_sub(v, u) for u in upper_fixed):
                assign[p] = v
                total += rec(i + 1, assign)
                del assign[p]
        return total

    return rec(0, {})


def _cube_below(k: int) -> tuple[list, dict]:
    pts = cube_points(k)
    below = {p: [q for q in pts if q != p and all(a <= b for a, b in zip(q, p))] for p in pts}
    return pts, below


def cube_maps(k: int, n: int, fixed: dict | None = None) -> int:
    """Monotone maps ``B^k -> D_n`` with some points pinned."""
    pts, below = _cube_below(k)
    return count_extensions(pts, below, monotone_strings(n), fixed or {})


def _point(s: str) -> tuple[int, ...]:
    return tuple(int(c) for c in s)


def g_oracle(x: Mbf, y: Mbf) -> int:
    return cube_maps(2, x.n, {_point("01"): x.value, _point("10"): y.value})


def h_oracle(x: Mbf, y: Mbf, z: Mbf) -> int:
    fixed = {_point("100"): x.value, _point("010"): y.value, _point("001"): z.value}
    return cube_maps(3, x.n, fixed)


def f_oracle(*args: Mbf) -> int:
    labels = ("0011", "0101", "1001", "0110", "1010", "1100")
    return cube_maps(4, args[0].n, {_point(s): a.value for s, a in zip(labels, args)})


def h_prime_oracle(u: Mbf, v: Mbf, w: Mbf) -> int:
    below = {p: set() for p in POSET_C}
    for lo, hi in _C_COVERS:
        below[hi].add(lo)
    changed = True
    while changed:
        changed = False
        for p in POSET_C:
            new = set().union(*(below[q] for q in below[p])) | below[p]
            if new != below[p]:
                below[p], changed = new, True
    fixed = {"c": u.value, "d": v.value, "e": w.value}
    return count_extensions(POSET_C, below, monotone_strings(u.n), fixed)


def interval_oracle(x: Mbf, y: Mbf) -> int:
    return sum(1 for z in monotone_strings(x.n) if _sub(x.value, z) and _sub(z, y.value))


def chain_oracle(n: int, length: int) -> int:
    """Multichains x_1 <= ... <= x_length in D_n."""
    els = monotone_strings(n)
    return sum(
        1
        for combo in itertools.product(els, repeat=length)
        if all(_sub(a, b) for a, b in zip(combo, combo[1:]))
    )


def canonical_oracle(g: Mbf) -> Mbf:
    """Minimum over all variable permutations, straight from the definition."""
    from .symmetry import apply_perm

    return min((apply_perm(pi, g) for pi in itertools.permutations(range(g.n))), key=lambda h: h.value)
