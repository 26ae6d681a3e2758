import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dedekind import oracles
from dedekind.errors import ArityMismatchError
from dedekind.intervals import lattice
from dedekind.mbf import Mbf, is_monotone, leq
from dedekind.symmetry import (
    apply_perm,
    build_orbits,
    canonical,
    e_complement,
    e_set,
    histogram_csv,
    no_symmetry_count,
    perm_action,
)

R = (2, 3, 5, 10, 30, 210, 16353)
D = (2, 3, 6, 20, 168, 7581, 7828354)


def m(s):
    return Mbf.from_string(s)


@pytest.fixture(scope="module")
def orbits():
    return {n: build_orbits(lattice(n)) for n in range(6)}


def test_swap_examples():
    assert apply_perm((1, 0), m("0011")) == m("0101")
    assert apply_perm((1, 0), m("0111")) == m("0111")
    g = m("0001011100010111")
    assert apply_perm((0, 1, 2, 3), g) == g


def test_apply_perm_rejects_wrong_arity():
    with pytest.raises(ArityMismatchError):
        apply_perm((0, 1, 2), m("0011"))


def test_canonical_examples():
    assert canonical(m("0101")) == m("0011")
    assert canonical(Mbf.bottom(3)) == Mbf.bottom(3)


@pytest.mark.parametrize("n", range(6))
def test_class_counts_and_partition(n, orbits):
    orb = orbits[n]
    assert orb.r == R[n]
    assert int(orb.gamma.sum()) == D[n]
    assert all(math.factorial(n) % int(g) == 0 for g in orb.gamma)
    assert np.all(np.diff(orb.rep_values) > 0)


def test_d2_representatives(orbits):
    assert [str(lattice(2)[int(i)]) for i in orbits[2].reps] == ["0000", "0001", "0011", "0111", "1111"]


def test_r4_histogram(orbits):
    assert orbits[4].histogram() == {1: 6, 3: 2, 4: 9, 6: 6, 12: 7}
    assert histogram_csv(orbits[4]) == "gamma,classes\n1,6\n3,2\n4,9\n6,6\n12,7\n"


@pytest.mark.slow
def test_d6_orbits(ctx):
    orb = ctx(6).require_orbits()
    assert orb.r == R[6]
    assert int(orb.gamma.sum()) == D[6]
    assert no_symmetry_count(orb) == 7281
    rng = random.Random(6)
    t = orb.table
    for _ in range(6):
        x = t[rng.randrange(len(t))]
        assert canonical(x) == orb.canonical_of(x)


@pytest.mark.parametrize("n, count", [(2, 1), (3, 0), (4, 0), (5, 7)])
def test_no_symmetry_counts(n, count, orbits):
    assert no_symmetry_count(orbits[n]) == count


def test_no_symmetry_at_one_variable(orbits):
    # every class of D_1 has trivial stabilizer since S_1 is trivial;
    # the published sequence lists 0 here by convention
    assert no_symmetry_count(orbits[1]) == 3


def test_e_complement_examples(orbits):
    t2 = lattice(2)
    assert t2.strings(e_complement(orbits[2], 2)) == ["0000", "0001", "0111", "1111"]
    o4 = orbits[4]
    for mod, size, classes in ((2, 12, 8), (3, 42, 15)):
        ec = e_complement(o4, mod)
        assert len(ec) == size
        assert len(np.unique(o4.class_id[ec])) == classes
    with pytest.raises(ValueError):
        e_complement(o4, 1)


@pytest.mark.parametrize("n", range(5))
def test_canonical_matches_brute_force(n, orbits):
    orb = orbits[n]
    for x in lattice(n):
        expect = oracles.canonical_oracle(x)
        assert canonical(x) == expect == orb.canonical_of(x)
        assert canonical(expect) == expect


def test_canonical_sampled_at_five(orbits):
    rng = random.Random(5)
    t = lattice(5)
    for _ in range(40):
        x = t[rng.randrange(len(t))]
        assert oracles.canonical_oracle(x) == orbits[5].canonical_of(x)


@pytest.mark.parametrize("n", range(1, 6))
def test_orbit_stabilizer(n, orbits):
    rng = random.Random(n)
    t = lattice(n)
    action = perm_action(n)
    for _ in range(25):
        x = t[rng.randrange(len(t))]
        images = action.images(x)
        stab = sum(1 for img in images if img == x)
        assert len(set(images)) * stab == math.factorial(n)
        assert orbits[n].gamma_of(x) == len(set(images))


@pytest.mark.parametrize("n", range(2, 6))
def test_byte_tables_agree_with_string_action(n):
    action = perm_action(n)
    t = lattice(n)
    sample = t.values[:: max(1, len(t) // 50)]
    for p, pi in enumerate(action.perms):
        got = action.apply_values(p, sample)
        assert [int(v) for v in got] == [apply_perm(pi, Mbf(int(v), n)).value for v in sample]


@pytest.mark.parametrize("n, mod", [(n, mod) for n in range(2, 6) for mod in (2, 3, 4, 5, 6)])
def test_ecomp_closed_under_every_permutation(n, mod, orbits):
    orb = orbits[n]
    action = perm_action(n)
    t = lattice(n)
    for members in (e_complement(orb, mod), e_set(orb, mod)):
        vals = t.values[members]
        for p in range(len(action)):
            assert np.array_equal(np.sort(action.apply_values(p, vals)), vals)
    # each orbit is mapped onto itself as well
    for p in range(len(action)):
        moved = t.indices(action.apply_values(p, t.values))
        assert np.array_equal(orb.class_id[moved], orb.class_id)


def _elements(n):
    t = lattice(n)
    return st.integers(0, len(t) - 1).map(lambda i: t[i])


@settings(max_examples=200)
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(
    _elements(n), _elements(n), st.permutations(list(range(n))))))
def test_permutations_preserve_order(case):
    x, y, pi = case
    px, py = apply_perm(pi, x), apply_perm(pi, y)
    assert is_monotone(px.bits)
    assert leq(x, y) == leq(px, py)


def test_perm_maps_are_bijections():
    for n in range(1, 6):
        action = perm_action(n)
        for row in action.maps:
            assert sorted(row) == list(range(2 ** n))
        assert len(action) == len(list(itertools.permutations(range(n))))
