"""Pure numpy versions of the inner loops, used when numba is disabled.

Results are identical to the compiled path; only speed differs. Sums are
taken over uint64 terms split into 32-bit halves so that no intermediate
numpy reduction can wrap.
"""
import numpy as np

_LOW32 = np.uint64(0xFFFFFFFF)


def _exact_sum(terms: np.ndarray) -> int:
    terms = np.asarray(terms, dtype=np.uint64).ravel()
    total = 0
    # chunks keep each 32-bit half sum below 2**64
    for start in range(0, terms.size, 1 << 30):
        chunk = terms[start:start + (1 << 30)]
        total += int(np.sum(chunk & _LOW32, dtype=np.uint64))
        total += int(np.sum(chunk >> np.uint64(32), dtype=np.uint64)) << 32
    return total


def _checked_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if np.any(a.astype(np.float64) * b.astype(np.float64) >= 1.8e19):
        raise OverflowError("a single kernel term exceeded 64 bits")
    return a * b


def permute_values(values, tables, p):
    values = np.asarray(values, dtype=np.uint64)
    out = np.zeros_like(values)
    for b in range(tables.shape[1]):
        out |= tables[p, b][((values >> np.uint64(8 * b)) & np.uint64(255)).astype(np.intp)]
    return out


def _images(v, tables):
    """All images of one value, one per permutation."""
    out = np.zeros(tables.shape[0], dtype=np.uint64)
    for b in range(tables.shape[1]):
        out |= tables[:, b, int((int(v) >> (8 * b)) & 255)]
    return out


def orbit_sweep(values, tables):
    values = np.asarray(values, dtype=np.uint64)
    n_el = len(values)
    class_id = np.full(n_el, -1, dtype=np.int64)
    reps, gamma = [], []
    pos = 0
    block = 1 << 16
    while pos < n_el:
        window = class_id[pos:pos + block]
        free = np.flatnonzero(window < 0)
        if free.size == 0:
            pos += len(window)
            continue
        i = pos + int(free[0])
        members = np.unique(np.searchsorted(values, _images(values[i], tables)))
        members = np.union1d(members, [i])
        class_id[members] = len(reps)
        reps.append(i)
        gamma.append(len(members))
        pos = i + 1
    return class_id, np.array(reps, dtype=np.int64), np.array(gamma, dtype=np.int64)


def down_split(prev_values, prev_down, targets, half):
    prev_values = np.asarray(prev_values, dtype=np.uint64)
    prev_down = np.asarray(prev_down, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.uint64)
    low_mask = np.uint64((1 << half) - 1)
    out = np.zeros(len(targets), dtype=np.int64)
    for t, x in enumerate(targets):
        x0 = x >> np.uint64(half)
        x1 = x & low_mask
        z1 = prev_values[(prev_values & ~x1) == 0]
        out[t] = prev_down[np.searchsorted(prev_values, x0 & z1)].sum()
    return out


def up3_table(R, J, C2, C3):
    N = R.shape[0]
    T = np.zeros(int(C3[N - 1] + C2[N - 1] + N), dtype=np.uint64)
    Rf = R.astype(np.float64)
    for j in range(N):
        for i in range(j + 1):
            pij = Rf[i] * Rf[j]
            vals = Rf[j:] @ pij
            T[i + C2[j] + C3[j:]] = vals.astype(np.uint64)
    return T


def up4_table(R, J, C2, C3, C4):
    # float64 is exact here: every partial sum stays below 2**53 for n <= 4
    N = R.shape[0]
    T = np.zeros(int(C4[N - 1] + C3[N - 1] + C2[N - 1] + N), dtype=np.uint64)
    Rf = R.astype(np.float64)
    for j in range(N):
        kk, ll = np.triu_indices(N - j)
        tail = C3[kk + j] + C4[ll + j]
        Rt = Rf[j:]
        for i in range(j + 1):
            block = (Rt * (Rf[i] * Rf[j])[None, :]) @ Rt.T
            T[i + C2[j] + tail] = block[kk, ll].astype(np.uint64)
    return T


def _ms_index(cols, C):
    s = np.sort(np.stack(cols, axis=-1), axis=-1)
    out = s[..., 0].astype(np.int64)
    for k in range(1, s.shape[-1]):
        out = out + C[k - 1][s[..., k]]
    return out


def h_rep_sums(reps, E, J, M, down, T3, C2, C3):
    E = np.asarray(E, dtype=np.int64)
    sums = []
    for x in reps:
        total = 0
        for y in E:
            xy = J[x, y]
            idx = _ms_index([np.full(len(E), xy), J[x, E], J[y, E]], (C2, C3))
            terms = _checked_product(down[M[M[x, y], E]], T3[idx])
            total += _exact_sum(terms)
        sums.append(total)
    return sums


def h_buckets(J, M, down, T3, C2, C3):
    N = J.shape[0]
    ar = np.arange(N)
    diag = _exact_sum(_checked_product(down, T3[_ms_index([ar, ar, ar], (C2, C3))]))
    pair = 0
    strict = 0
    for x in range(N):
        ys = ar[x + 1:]
        xy = J[x, ys]
        t = T3[_ms_index([np.full(len(ys), x), xy, xy], (C2, C3))] + T3[_ms_index([xy, xy, ys], (C2, C3))]
        pair += _exact_sum(_checked_product(down[M[x, ys]], t))
        for y in range(x + 1, N):
            zs = ar[y + 1:]
            if not len(zs):
                continue
            idx = _ms_index([np.full(len(zs), J[x, y]), J[x, zs], J[y, zs]], (C2, C3))
            strict += _exact_sum(_checked_product(down[M[M[x, y], zs]], T3[idx]))
    return diag, pair, strict


def f_pair_sums(outer_a, outer_b, E, J, dual, T4, C2, C3, C4):
    E = np.asarray(E, dtype=np.int64)
    Cs = (C2, C3, C4)
    Ed = dual[E]
    # axes: d, e, f
    d_, e_, f_ = E[:, None, None], E[None, :, None], E[None, None, :]
    dd_, ed_, fd_ = Ed[:, None, None], Ed[None, :, None], Ed[None, None, :]
    shape = (len(E),) * 3
    j4 = J[J[d_, e_], f_]
    sums = []
    for a, b in zip(outer_a, outer_b):
        ad, bd = dual[a], dual[b]
        ab, abd = J[a, b], J[ad, bd]
        j1 = J[ab, d_]
        k2 = J[J[ad, dd_], ed_]
        k3 = J[J[bd, dd_], fd_]
        total = 0
        for c in E:
            cd = dual[c]
            j2 = J[J[a, c], e_]
            j3 = J[J[b, c], f_]
            k1 = J[abd, cd]
            k4 = J[J[cd, ed_], fd_]
            up = T4[_ms_index([np.broadcast_to(v, shape) for v in (j1, j2, j3, j4)], Cs)]
            low = T4[_ms_index([np.broadcast_to(v, shape) for v in (k1, k2, k3, k4)], Cs)]
            total += _exact_sum(_checked_product(up, low))
        sums.append(total)
    return sums


def g_rep_sums(rep_values, Y, values, up, down):
    Y = np.asarray(Y, dtype=np.uint64)
    up = np.asarray(up, dtype=np.int64)
    down = np.asarray(down, dtype=np.int64)
    sums = []
    for x in np.asarray(rep_values, dtype=np.uint64):
        j = np.searchsorted(values, x | Y)
        m = np.searchsorted(values, x & Y)
        sums.append(_exact_sum(_checked_product(up[j], down[m])))
    return sums
