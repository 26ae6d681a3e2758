"""numba-compiled inner loops.

Every summing kernel accumulates into a pair of uint64 words (low, high) with
carry detection, so partial sums are exact past 2**64. The Python wrappers at
the bottom fold the pairs into ints.
"""
import numpy as np
from numba import njit, prange

_ONE = np.uint64(1)
_F64_LIMIT = 1.8e19


@njit(cache=True)
def _bsearch(values, v):
    lo = 0
    hi = values.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if values[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def _apply(tables, p, v):
    out = np.uint64(0)
    for b in range(tables.shape[1]):
        out |= tables[p, b, (v >> np.uint64(8 * b)) & np.uint64(255)]
    return out


@njit(cache=True)
def _permute_all(values, tables, p):
    out = np.empty_like(values)
    for i in range(values.shape[0]):
        out[i] = _apply(tables, p, values[i])
    return out


def permute_values(values, tables, p):
    return _permute_all(np.ascontiguousarray(values, dtype=np.uint64), tables, p)


@njit(cache=True)
def _orbit_sweep(values, tables):
    n_el = values.shape[0]
    n_perm = tables.shape[0]
    class_id = np.full(n_el, -1, dtype=np.int64)
    reps = np.empty(n_el, dtype=np.int64)
    gamma = np.empty(n_el, dtype=np.int64)
    n_cls = 0
    for i in range(n_el):
        if class_id[i] >= 0:
            continue
        class_id[i] = n_cls
        size = 1
        v = values[i]
        for p in range(n_perm):
            j = _bsearch(values, _apply(tables, p, v))
            if class_id[j] < 0:
                class_id[j] = n_cls
                size += 1
        reps[n_cls] = i
        gamma[n_cls] = size
        n_cls += 1
    return class_id, reps[:n_cls].copy(), gamma[:n_cls].copy()


def orbit_sweep(values, tables):
    return _orbit_sweep(np.ascontiguousarray(values, dtype=np.uint64), tables)


@njit(cache=True)
def _down_split(prev_values, prev_down, targets, half):
    low_mask = (_ONE << np.uint64(half)) - _ONE
    out = np.zeros(targets.shape[0], dtype=np.int64)
    for t in range(targets.shape[0]):
        x0 = targets[t] >> np.uint64(half)
        x1 = targets[t] & low_mask
        s = 0
        for k in range(prev_values.shape[0]):
            z1 = prev_values[k]
            if z1 & ~x1 == 0:
                s += prev_down[_bsearch(prev_values, x0 & z1)]
        out[t] = s
    return out


def down_split(prev_values, prev_down, targets, half):
    return _down_split(
        np.ascontiguousarray(prev_values, dtype=np.uint64),
        np.ascontiguousarray(prev_down, dtype=np.int64),
        np.ascontiguousarray(targets, dtype=np.uint64),
        half,
    )


@njit(cache=True)
def _up3_table(R, J, C2, C3):
    N = R.shape[0]
    T = np.zeros(C3[N - 1] + C2[N - 1] + N, dtype=np.uint64)
    for k in range(N):
        for j in range(k + 1):
            jk = J[j, k]
            for i in range(j + 1):
                top = J[i, jk]
                s = np.uint64(0)
                for u in range(top, N):
                    if R[top, u]:
                        s += np.uint64(R[i, u] * R[j, u] * R[k, u])
                T[i + C2[j] + C3[k]] = s
    return T


@njit(cache=True)
def _up4_table(R, J, C2, C3, C4):
    N = R.shape[0]
    T = np.zeros(C4[N - 1] + C3[N - 1] + C2[N - 1] + N, dtype=np.uint64)
    for l in range(N):
        for k in range(l + 1):
            kl = J[k, l]
            for j in range(k + 1):
                jkl = J[j, kl]
                for i in range(j + 1):
                    top = J[i, jkl]
                    s = np.uint64(0)
                    for u in range(top, N):
                        if R[top, u]:
                            s += np.uint64(R[i, u] * R[j, u] * R[k, u] * R[l, u])
                    T[i + C2[j] + C3[k] + C4[l]] = s
    return T


def up3_table(R, J, C2, C3):
    return _up3_table(R, J, C2, C3)


def up4_table(R, J, C2, C3, C4):
    return _up4_table(R, J, C2, C3, C4)


@njit(cache=True, inline="always")
def _ms3(a, b, c, C2, C3):
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    return a + C2[b] + C3[c]


@njit(cache=True, inline="always")
def _ms4(a, b, c, d, C2, C3, C4):
    if a > b:
        a, b = b, a
    if c > d:
        c, d = d, c
    if a > c:
        a, c = c, a
    if b > d:
        b, d = d, b
    if b > c:
        b, c = c, b
    return a + C2[b] + C3[c] + C4[d]


@njit(cache=True, parallel=True)
def _h_rep_sums(reps, E, J, M, down, T3, C2, C3):
    lo = np.zeros(reps.shape[0], dtype=np.uint64)
    hi = np.zeros(reps.shape[0], dtype=np.uint64)
    for r in prange(reps.shape[0]):
        x = reps[r]
        acc = np.uint64(0)
        carry = np.uint64(0)
        for y in E:
            xy = J[x, y]
            mxy = M[x, y]
            for z in E:
                v = np.uint64(down[M[mxy, z]]) * T3[_ms3(xy, J[x, z], J[y, z], C2, C3)]
                acc += v
                if acc < v:
                    carry += _ONE
        lo[r] = acc
        hi[r] = carry
    return lo, hi


@njit(cache=True)
def _h_buckets(J, M, down, T3, C2, C3):
    # (diagonal, pairs x<y, strict triples x<y<z) as (lo, hi) words
    N = J.shape[0]
    out = np.zeros((3, 2), dtype=np.uint64)
    for x in range(N):
        v = np.uint64(down[x]) * T3[_ms3(x, x, x, C2, C3)]
        out[0, 0] += v
        if out[0, 0] < v:
            out[0, 1] += _ONE
        for y in range(x + 1, N):
            xy = J[x, y]
            mxy = M[x, y]
            # H(x,x,y) and H(x,y,y)
            v = np.uint64(down[mxy]) * (T3[_ms3(x, xy, xy, C2, C3)] + T3[_ms3(xy, xy, y, C2, C3)])
            out[1, 0] += v
            if out[1, 0] < v:
                out[1, 1] += _ONE
            for z in range(y + 1, N):
                v = np.uint64(down[M[mxy, z]]) * T3[_ms3(xy, J[x, z], J[y, z], C2, C3)]
                out[2, 0] += v
                if out[2, 0] < v:
                    out[2, 1] += _ONE
    return out


@njit(cache=True, parallel=True)
def _f_pair_sums(outer_a, outer_b, E, J, dual, T4, C2, C3, C4):
    n_out = outer_a.shape[0]
    lo = np.zeros(n_out, dtype=np.uint64)
    hi = np.zeros(n_out, dtype=np.uint64)
    bad = np.zeros(n_out, dtype=np.bool_)
    for o in prange(n_out):
        a = outer_a[o]
        b = outer_b[o]
        ad = dual[a]
        bd = dual[b]
        ab = J[a, b]
        abd = J[ad, bd]
        acc = np.uint64(0)
        carry = np.uint64(0)
        over = False
        for c in E:
            cd = dual[c]
            bc = J[b, c]
            ac = J[a, c]
            # lower factors are upper factors of the duals
            k1 = J[abd, cd]
            acd = J[ad, cd]
            for d in E:
                dd = dual[d]
                j1 = J[ab, d]
                bdd = J[bd, dd]
                addd = J[ad, dd]
                for e in E:
                    ed = dual[e]
                    j2 = J[ac, e]
                    k2 = J[addd, ed]
                    de = J[d, e]
                    ced = J[cd, ed]
                    for f in E:
                        fd = dual[f]
                        up = T4[_ms4(j1, j2, J[bc, f], J[de, f], C2, C3, C4)]
                        low = T4[_ms4(k1, k2, J[bdd, fd], J[ced, fd], C2, C3, C4)]
                        if float(up) * float(low) >= _F64_LIMIT:
                            over = True
                        v = up * low
                        acc += v
                        if acc < v:
                            carry += _ONE
        lo[o] = acc
        hi[o] = carry
        bad[o] = over
    return lo, hi, bad


@njit(cache=True, parallel=True)
def _g_rep_sums(rep_values, Y, values, up, down):
    lo = np.zeros(rep_values.shape[0], dtype=np.uint64)
    hi = np.zeros(rep_values.shape[0], dtype=np.uint64)
    for r in prange(rep_values.shape[0]):
        x = rep_values[r]
        acc = np.uint64(0)
        carry = np.uint64(0)
        for k in range(Y.shape[0]):
            y = Y[k]
            v = np.uint64(up[_bsearch(values, x | y)]) * np.uint64(down[_bsearch(values, x & y)])
            acc += v
            if acc < v:
                carry += _ONE
        lo[r] = acc
        hi[r] = carry
    return lo, hi


def _fold(lo, hi):
    return [(int(h) << 64) | int(l) for l, h in zip(lo, hi)]


def h_rep_sums(reps, E, J, M, down, T3, C2, C3):
    return _fold(*_h_rep_sums(reps, E, J, M, down, T3, C2, C3))


def h_buckets(J, M, down, T3, C2, C3):
    out = _h_buckets(J, M, down, T3, C2, C3)
    return tuple(_fold(out[:, 0], out[:, 1]))


def f_pair_sums(outer_a, outer_b, E, J, dual, T4, C2, C3, C4):
    lo, hi, bad = _f_pair_sums(outer_a, outer_b, E, J, dual, T4, C2, C3, C4)
    if bad.any():
        raise OverflowError("a single F term exceeded 64 bits")
    return _fold(lo, hi)


def g_rep_sums(rep_values, Y, values, up, down):
    return _fold(*_g_rep_sums(
        np.ascontiguousarray(rep_values, dtype=np.uint64),
        np.ascontiguousarray(Y, dtype=np.uint64),
        values,
        np.ascontiguousarray(up, dtype=np.int64),
        np.ascontiguousarray(down, dtype=np.int64),
    ))
