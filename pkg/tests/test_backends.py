"""The compiled and numpy kernels must agree term for term."""
import os
import subprocess
import sys

import numpy as np
import pytest

from dedekind import kernels
from dedekind._backend import HAVE_NUMBA
from dedekind.kernels import _np
from dedekind.symmetry import perm_action

pytestmark = pytest.mark.skipif(not HAVE_NUMBA, reason="numba unavailable")


@pytest.fixture(scope="module")
def nb():
    from dedekind.kernels import _nb

    return _nb


@pytest.fixture(scope="module", params=[2, 3, 4])
def parts(request, ctx):
    c = ctx(request.param)
    c2, c3, c4 = c.offsets
    return c, c2, c3, c4


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


@pytest.mark.parametrize("n", range(1, 6))
def test_permute_and_orbits(nb, ctx, n):
    values = ctx(n).values
    tables = perm_action(n).tables
    for p in range(len(perm_action(n))):
        assert np.array_equal(nb.permute_values(values, tables, p), _np.permute_values(values, tables, p))
    assert _same(nb.orbit_sweep(values, tables), _np.orbit_sweep(values, tables))


@pytest.mark.parametrize("n", range(1, 6))
def test_down_split(nb, ctx, n):
    prev = ctx(n - 1)
    half = 1 << (n - 1)
    targets = ctx(n).values
    got = nb.down_split(prev.values, prev.down.counts, targets, half)
    assert np.array_equal(got, _np.down_split(prev.values, prev.down.counts, targets, half))


def test_multiset_tables(nb, parts):
    c, c2, c3, c4 = parts
    assert np.array_equal(nb.up3_table(c.R, c.join_idx, c2, c3), _np.up3_table(c.R, c.join_idx, c2, c3))
    assert np.array_equal(nb.up4_table(c.R, c.join_idx, c2, c3, c4), _np.up4_table(c.R, c.join_idx, c2, c3, c4))


def test_h_sums(nb, parts):
    c, c2, c3, _ = parts
    reps = c.require_orbits().reps
    E = np.arange(len(c.table))
    args = (c.join_idx, c.meet_idx, c.down.counts, c.up3, c2, c3)
    assert nb.h_rep_sums(reps, E, *args) == _np.h_rep_sums(reps, E, *args)
    assert list(nb.h_buckets(*args)) == list(_np.h_buckets(*args))


def test_f_sums(nb, parts):
    c, c2, c3, c4 = parts
    N = len(c.table)
    E = np.arange(N)
    rng = np.random.default_rng(N)
    k = min(N * N, 6 if N > 20 else 40)
    a = rng.integers(0, N, k)
    b = rng.integers(0, N, k)
    if N > 20:
        E = np.sort(rng.choice(N, 30, replace=False))
    args = (E, c.join_idx, c.dual_idx, c.up4, c2, c3, c4)
    assert nb.f_pair_sums(a, b, *args) == _np.f_pair_sums(a, b, *args)


@pytest.mark.parametrize("n", range(1, 6))
def test_g_sums(nb, ctx, n):
    c = ctx(n)
    reps = c.values[c.require_orbits().reps]
    args = (reps, c.values, c.values, c.up, c.down.counts)
    assert nb.g_rep_sums(*args) == _np.g_rep_sums(*args)


def test_env_flag_selects_numpy():
    code = "from dedekind import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, DEDEKIND_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
    assert kernels.BACKEND == "numba"


def test_numpy_backend_end_to_end():
    code = (
        "from dedekind import engines as E\n"
        "c = E.KernelContext.build(3)\n"
        "print(E.d_via_g(c), E.d_via_h(c), E.residue_via_h(c, 4).sum, E.d_via_f(E.KernelContext.build(1)))\n"
    )
    env = dict(os.environ, DEDEKIND_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    g, h, hr, f = map(int, out.stdout.split())
    from dedekind import engines as E
    from dedekind.engines import KernelContext

    c = KernelContext.build(3)
    assert (g, h, f) == (7581, 7828354, 7581)
    assert hr == E.residue_via_h(c, 4).sum
