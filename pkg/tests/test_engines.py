import itertools
import random

import numpy as np
import pytest

from dedekind import congruence as C
from dedekind import engines as E
from dedekind import oracles
from dedekind.errors import BudgetExceededError, ResourceLimitError
from dedekind.mbf import Mbf
from dedekind.symmetry import apply_perm, e_set

D = C.DEDEKIND
Z, O = Mbf(0, 0), Mbf(1, 0)

# weight-two points of B^4 in f_six argument order
MIDDLE = ("0011", "0101", "1001", "0110", "1010", "1100")


def _middle_rearrangements():
    """Argument orders induced on f_six by permuting the four cube coordinates."""
    out = []
    for sigma in itertools.permutations(range(4)):
        moved = ["".join(p[sigma[j]] for j in range(4)) for p in MIDDLE]
        out.append(tuple(MIDDLE.index(q) for q in moved))
    return out


def _sample(ctx, k, rng):
    t = ctx.table
    return tuple(t[rng.randrange(len(t))] for _ in range(k))


# -- G --------------------------------------------------------------------------

def test_g_table_over_d2(ctx):
    c = ctx(2)
    els = list(c.table)
    table = tuple(tuple(E.g_pair(x, y, c) for y in els) for x in els)
    assert table == C.G_TABLE_D2
    assert sum(map(sum, table)) == 168


def test_g_reduced_sum_base2(ctx):
    w = E.residue_via_g(ctx(2), 2)
    assert (w.sum, w.residue, w.target) == (70, 0, 4)


@pytest.mark.parametrize("n", range(6))
def test_d_via_g(n, ctx):
    assert E.d_via_g(ctx(n)) == D[n + 2]


def test_g_matches_definition(ctx):
    for n in range(3):
        c = ctx(n)
        for x, y in itertools.product(c.table, repeat=2):
            assert E.g_pair(x, y, c) == oracles.g_oracle(x, y)


# -- H and H' --------------------------------------------------------------------

def test_h_definitional_examples(ctx):
    c = ctx(0)
    assert E.h_triple(Z, Z, Z, c) == oracles.h_oracle(Z, Z, Z) == 9
    assert E.h_triple(O, O, O, c) == oracles.h_oracle(O, O, O) == 2
    assert E.h_prime(Z, Z, Z, c) == oracles.h_prime_oracle(Z, Z, Z) == 2
    assert E.h_prime(O, O, O, c) == oracles.h_prime_oracle(O, O, O) == 3
    assert sum(E.h_triple(*t, c) for t in itertools.product((Z, O), repeat=3)) == 20


@pytest.mark.parametrize("n", range(3))
def test_h_kernels_match_definition(n, ctx):
    c = ctx(n)
    rng = random.Random(n)
    cases = list(itertools.product(c.table, repeat=3))
    if len(cases) > 300:
        cases = rng.sample(cases, 300)
    for args in cases:
        assert E.h_triple(*args, c) == oracles.h_oracle(*args)
        assert E.h_prime(*args, c) == oracles.h_prime_oracle(*args)


@pytest.mark.parametrize("n", range(5))
def test_d_via_h(n, ctx):
    c = ctx(n)
    assert E.d_via_h(c) == D[n + 3]
    assert E.d_via_h_reduced(c) == D[n + 3]


def test_h_dense_limit(ctx):
    with pytest.raises(ResourceLimitError):
        E.d_via_h(ctx(5))


@pytest.mark.parametrize("n", range(3))
def test_h_prime_identities(n, ctx):
    c = ctx(n)
    els = list(c.table)
    h_diag = sum(E.h_triple(x, x, x, c) for x in els)
    h_prime_all = sum(E.h_prime(u, v, w, c) for u, v, w in itertools.product(els, repeat=3))
    diag, pair, strict = E.h_prime_buckets(c)
    # H(x, x, x) summed counts maps from the six-point poset, as does H' over all triples
    assert h_diag == h_prime_all == diag + 3 * pair + 6 * strict
    # the diagonal of H' counts 4-chains
    assert diag == E.p4_count(c) == C.CHAIN4[n]
    assert h_diag % 3 == diag % 3 == D[n + 3] % 3


# -- F ----------------------------------------------------------------------------

def test_f_definitional_examples(ctx):
    c = ctx(0)
    assert E.f_six(*[Z] * 6, c) == oracles.f_oracle(*[Z] * 6) == 17
    assert E.f_six(*[O] * 6, c) == oracles.f_oracle(*[O] * 6) == 17
    assert sum(E.f_six(*t, c) for t in itertools.product((Z, O), repeat=6)) == 168


def test_f_matches_definition(ctx):
    rng = random.Random(4)
    for n in range(2):
        c = ctx(n)
        for _ in range(60):
            args = _sample(c, 6, rng)
            assert E.f_six(*args, c) == oracles.f_oracle(*args)


@pytest.mark.parametrize("n", range(4))
def test_d_via_f(n, ctx):
    assert E.d_via_f(ctx(n)) == D[n + 4]


def test_f_scalar_matches_summed_kernel(ctx):
    c = ctx(2)
    els = list(c.table)
    a = els[3]
    direct = sum(E.f_six(a, *rest, c) for rest in itertools.product(els, repeat=5))
    assert direct == E._f_sum(c, [3], [1], np.arange(len(els)), "check")


# -- kernel symmetries --------------------------------------------------------------

def test_g_h_argument_invariance(ctx):
    rng = random.Random(10)
    for _ in range(10_000):
        n = rng.choice((2, 3))
        c = ctx(n)
        x, y, z = _sample(c, 3, rng)
        assert E.g_pair(x, y, c) == E.g_pair(y, x, c)
        ref_h, ref_p = E.h_triple(x, y, z, c), E.h_prime(x, y, z, c)
        perm = rng.choice(list(itertools.permutations((x, y, z))))
        assert E.h_triple(*perm, c) == ref_h
        assert E.h_prime(*perm, c) == ref_p


def test_f_middle_layer_invariance(ctx):
    rng = random.Random(11)
    orders = _middle_rearrangements()
    assert len(set(orders)) == 24
    c = ctx(3)
    for _ in range(10_000 // 24):
        args = _sample(c, 6, rng)
        ref = E.f_six(*args, c)
        for order in orders:
            assert E.f_six(*[args[i] for i in order], c) == ref


@pytest.mark.parametrize("n", (2, 3, 4))
def test_simultaneous_permutation_equivariance(n, ctx):
    c = ctx(n)
    rng = random.Random(20 + n)
    perms = list(itertools.permutations(range(n)))
    for _ in range(60):
        pi = rng.choice(perms)
        args = _sample(c, 6, rng)
        moved = [apply_perm(pi, a) for a in args]
        assert E.g_pair(*args[:2], c) == E.g_pair(*moved[:2], c)
        assert E.h_triple(*args[:3], c) == E.h_triple(*moved[:3], c)
        assert E.h_prime(*args[:3], c) == E.h_prime(*moved[:3], c)
        assert E.f_six(*args, c) == E.f_six(*moved, c)


def test_no_even_orbits_at_three(ctx):
    # orbit sizes at n = 3 are 1 and 3, so E_{3,2} is empty
    assert len(e_set(ctx(3).require_orbits(), 2)) == 0


@pytest.mark.parametrize("n, m", [(2, 2), (3, 3), (4, 2), (4, 3)])
def test_sums_over_e_blocks_are_divisible(n, m, ctx):
    c = ctx(n)
    orb = c.require_orbits()
    block = e_set(orb, m)
    assert len(block) > 0
    everything = np.arange(len(c.table))
    ones = np.ones(len(block), dtype=np.int64)
    ec = c.ecomp(m)
    sums = [
        E._g_sum(c, block, ones, c.values, "G block"),
        E._h_sum(c, block, ones, everything, "H block"),
        # remaining coordinates restricted to E^c
        E._g_sum(c, block, ones, c.values[ec], "G block"),
        E._h_sum(c, block, ones, ec, "H block"),
    ]
    if n <= 3:
        sums += [
            E._f_sum(c, block, ones, everything, "F block"),
            E._f_sum(c, block, ones, ec, "F block"),
        ]
    assert all(s % m == 0 for s in sums)
    assert all(s > 0 for s in sums[:2])


def test_divisibility_by_scalar_loops(ctx):
    c = ctx(2)
    block = [c.table[int(i)] for i in e_set(c.require_orbits(), 2)]
    els = list(c.table)
    total = sum(E.h_triple(x, y, z, c) for x in block for y in els for z in els)
    assert total % 2 == 0


# -- residues -----------------------------------------------------------------------

@pytest.mark.parametrize("n, m", [(n, m) for n in range(2, 6) for m in (2, 3, 4, 5, 6, 7)])
def test_g_residues_agree_with_known(n, m, ctx):
    w = E.residue_via_g(ctx(n), m)
    assert w.residue == C.known_residue(n + 2, m)


@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 5) for m in (2, 3, 4, 5, 6)])
def test_h_residues_agree_with_known(n, m, ctx):
    w = E.residue_via_h(ctx(n), m)
    assert w.residue == C.known_residue(n + 3, m)
    assert w.sum % m == w.residue


@pytest.mark.parametrize("n, m", [(n, m) for n in range(1, 4) for m in (2, 3, 4, 5)])
def test_f_residues_agree_with_known(n, m, ctx):
    assert E.residue_via_f(ctx(n), m).residue == C.known_residue(n + 4, m)


def test_reduce_mode_keeps_residue(ctx):
    c = ctx(4)
    full, red = E.residue_via_h(c, 12), E.residue_via_h(c, 12, reduce=True)
    assert full.sum == C.H3_SUMS_BASE4[12]
    assert red.residue == full.residue and red.sum < 12


def test_f_budget_guard(ctx):
    c = ctx(4)
    with pytest.raises(BudgetExceededError) as info:
        E.residue_via_f(c, 12)
    assert info.value.count == 23 * 84**5 == E.f_tuple_count(c, 12)


def test_witness_roundtrip_and_validation():
    w = E.ResidueWitness(8, 4, "F4", C.F4_SUMS_BASE4[4], 0, 4, 12)
    d = w.to_dict()
    assert all(isinstance(v, str) for v in d.values())
    assert E.ResidueWitness.from_dict(d) == w
    with pytest.raises(ValueError):
        E.ResidueWitness(8, 4, "XX", 0, 0, 4)
    with pytest.raises(ValueError):
        E.ResidueWitness(8, 4, "F4", 5, 5, 4)


# -- chains and self-duals -------------------------------------------------------------

@pytest.mark.parametrize("n", range(6))
def test_p4_counts(n, ctx):
    assert E.p4_count(ctx(n)) == C.CHAIN4[n]
    assert C.CHAIN4[n] % 3 == D[n + 3] % 3


def test_p4_limit(ctx):
    with pytest.raises(ResourceLimitError):
        E.p4_count(ctx(6))


@pytest.mark.parametrize("n", range(5))
def test_p4_against_chains(n, ctx):
    c = ctx(n)
    assert E.multichain_count(c, 4) == C.CHAIN4[n]
    if n <= 3:
        assert E.matrix_cube_sum(c) == C.CHAIN4[n]
    if n <= 2:
        assert oracles.chain_oracle(n, 4) == C.CHAIN4[n]


def test_printed_matrix_cubes(ctx):
    assert E.matrix_cube(ctx(1)).tolist() == [list(r) for r in C.CUBE_D1]
    assert E.matrix_cube(ctx(2)).tolist() == [list(r) for r in C.CUBE_D2]
    with pytest.raises(ResourceLimitError):
        E.matrix_cube(ctx(4))


@pytest.mark.parametrize("n", range(7))
def test_self_duals_and_parity(n, ctx):
    lam = E.selfdual_count(ctx(n))
    assert lam == C.SELF_DUAL[n]
    assert lam % 2 == D[n] % 2
    w = E.residue_via_selfdual(ctx(n))
    assert w.residue == C.known_residue(n, 2)


def test_even_targets_are_even(ctx):
    assert E.d_via_g(ctx(2)) % 2 == 0
    assert E.d_via_h(ctx(3)) % 2 == 0
    assert E.d_via_f(ctx(2)) % 2 == 0
    assert E.residue_via_f(ctx(4), 2).residue == 0
