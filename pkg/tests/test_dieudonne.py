import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from zipstrata.canonical import canonical_data
from zipstrata.dieudonne import (
    CoordinateFlag, DieudonnePair, act, all_complements, canonical_flag,
    check_transform, coordinate_complements, exhaustive_coarsest_flag, finv_op,
    flag_closure, flag_stabilizer, in_P, in_V, is_stable, lemma_flag,
    linear_canonical_flag, ordered_set_partitions, pair_from_matrix, perm_matrix,
    psi, random_complement, random_invertible, random_P, random_pair, span,
    standard_pair, v_op,
)
from zipstrata.field import GF
from zipstrata.rootzip import all_roots, borel_z, gl_zip_datum, stratum_parameters
from zipstrata.weyl import Permutation, all_permutations, identity

P = Permutation.parse
SMALL = [(n, d) for n in range(2, 5) for d in range(1, n)]
MEDIUM = [(n, d) for n in range(2, 6) for d in range(1, n)]

# Interior members of the canonical flag of f = z w, from a standalone closure
# computation (no package code).
FLAGS = {
    (2, 1): {"1,2": [[2]], "2,1": [[2]]},
    (3, 1): {"1,2,3": [[3], [1, 3]], "1,3,2": [[3], [1, 3]], "2,3,1": [[3]]},
    (4, 1): {"1,2,3,4": [[4], [1, 4], [1, 2, 4]], "1,2,4,3": [[4], [1, 4], [1, 2, 4]],
             "1,3,4,2": [[4], [1, 4]], "2,3,4,1": [[4]]},
    (4, 2): {"1,2,3,4": [[3, 4]], "1,3,2,4": [[3], [3, 4], [1, 3, 4]],
             "1,4,2,3": [[3], [3, 4], [1, 3, 4]], "2,3,1,4": [[3], [3, 4], [1, 3, 4]],
             "2,4,1,3": [[3], [3, 4], [1, 3, 4]], "3,4,1,2": [[3, 4]]},
    (4, 3): {"1,2,3,4": [[2], [2, 3], [2, 3, 4]], "2,1,3,4": [[2], [2, 3], [2, 3, 4]],
             "3,1,2,4": [[2, 3], [2, 3, 4]], "4,1,2,3": [[2, 3, 4]]},
}


def _support_ok(m):
    return (all(sum(1 for x in row if x) <= 1 for row in m)
            and all(sum(1 for x in col if x) <= 1 for col in zip(*m))
            and all(x in (0, 1) for row in m for x in row))


# standard pairs and Psi

def test_standard_pair_examples():
    Z = gl_zip_datum(2, 1, 2)
    pair = standard_pair(Z, identity(2))  # f = z = swap
    assert pair.a == ((0, 0), (1, 0))
    assert pair.sigma_b() == ((0, 0), (1, 0))
    assert psi(pair, {1}) == ((0, 1), (1, 0))
    pair = standard_pair(Z, P("2,1"))  # f = identity
    assert pair.a == ((1, 0), (0, 0))
    assert pair.sigma_b() == ((0, 0), (0, 1))


@pytest.mark.parametrize("n,d", MEDIUM)
def test_standard_pairs_are_0_1_and_round_trip(n, d):
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, 1)
    for w in stratum_parameters(Z):
        pair = standard_pair(Z, w)
        assert pair.in_Y()
        assert _support_ok(pair.a) and _support_ok(pair.b)
        f = Z.z * w
        H = frozenset(f(i) for i in Z.V2)
        assert H in coordinate_complements(pair)
        assert psi(pair, H) == perm_matrix(F, f)


def test_standard_pair_rejects_non_parameters():
    with pytest.raises(ValueError):
        standard_pair(gl_zip_datum(3, 1, 2), P("2,1,3"))


def test_psi_rejects_non_complements():
    Z = gl_zip_datum(2, 1, 2)
    pair = standard_pair(Z, identity(2))  # im a = <e_2>
    with pytest.raises(ValueError):
        psi(pair, {2})


def _brute_Y(Z, F):
    """Every pair in Y, by running over all (a, b) with ker a ⊇ V_2."""
    n, m = Z.n, Z.n - Z.d
    out = set()
    for avals in product(F.elements(), repeat=n * m):
        a = tuple(tuple(avals[i * m:(i + 1) * m]) + (0,) * Z.d for i in range(n))
        if F.rank(a) != m:
            continue
        for bvals in product(F.elements(), repeat=n * n):
            b = tuple(tuple(bvals[i * n:(i + 1) * n]) for i in range(n))
            pair = DieudonnePair(a, b, Z.d, Z.p, F.k)
            if pair.in_Y():
                out.add((a, b))
    return out


def _gl(F, n):
    for vals in product(F.elements(), repeat=n * n):
        m = tuple(tuple(vals[i * n:(i + 1) * n]) for i in range(n))
        if F.is_invertible(m):
            yield m


@pytest.mark.parametrize("n,d,k", [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 2, 1)])
def test_psi_is_a_bijection_onto_cosets(n, d, k):
    """Y is in bijection with GL_n / V, exhaustively."""
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, k)
    Y = _brute_Y(Z, F)
    fibres = {}
    for f in _gl(F, n):
        pair = pair_from_matrix(Z, f, k)
        fibres.setdefault((pair.a, pair.b), []).append(f)
    assert set(fibres) == Y
    size_V = F.q ** len(Z.V)
    for (a, b), fs in fibres.items():
        assert len(fs) == size_V
        pair = DieudonnePair(a, b, d, 2, k)
        for H in all_complements(pair):
            fH = psi(pair, H)
            assert fH in fs
            assert in_V(F.matmul(F.inverse(fs[0]), fH), Z)


@pytest.mark.parametrize("n,d", SMALL)
def test_psi_changes_by_V_between_complements(n, d):
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, 1)
    for w in stratum_parameters(Z):
        pair = standard_pair(Z, w)
        fs = [psi(pair, H) for H in coordinate_complements(pair)]
        for f1 in fs:
            for f2 in fs:
                assert in_V(F.matmul(F.inverse(f1), f2), Z)


# the action

def test_act_examples():
    Z = gl_zip_datum(3, 1, 2)
    pair = standard_pair(Z, identity(3))
    F = pair.field
    assert act(F.eye(3), pair) == pair
    Z5 = gl_zip_datum(3, 1, 5)
    pair5 = standard_pair(Z5, identity(3))
    F5 = pair5.field
    scalar = tuple(tuple(3 if i == j else 0 for j in range(3)) for i in range(3))
    assert act(scalar, pair5) == pair5
    with pytest.raises(ValueError):
        act(F5.zeros(3), pair5)


@pytest.mark.parametrize("n,d", SMALL)
def test_act_is_a_group_action_preserving_X(n, d):
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, 2)
    rng = random.Random(1)
    for _ in range(25):
        pair = random_pair(Z, rng, 2)
        M1, M2 = random_invertible(F, n, rng), random_invertible(F, n, rng)
        moved = act(M1, pair)
        assert moved.in_X()
        assert act(M1, act(M2, pair)) == act(F.matmul(M1, M2), pair)
        MP = random_P(F, Z, rng)
        assert in_P(MP, Z) and act(MP, pair).in_Y()


def test_transform_law_examples():
    Z = gl_zip_datum(3, 1, 2)
    F = GF.get(2, 2)
    pair = standard_pair(Z, identity(3), k=2)
    H = coordinate_complements(pair)[0]
    assert check_transform(F.eye(3), pair, H, Z)
    # unipotent radical of P = Stab(<e_3>): entries in row 3 left of the diagonal
    for x, y in product(F.elements(), repeat=2):
        M = ((1, 0, 0), (0, 1, 0), (x, y, 1))
        assert in_P(M, Z)
        assert check_transform(M, pair, H, Z)


@pytest.mark.parametrize("n,d", SMALL)
def test_transform_law_random(n, d):
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, 2)
    rng = random.Random(n * 10 + d)
    for _ in range(30):
        pair = random_pair(Z, rng, 2)
        assert check_transform(random_P(F, Z, rng), pair, random_complement(pair, rng), Z)


def test_transform_rejects_M_outside_P():
    Z = gl_zip_datum(2, 1, 2)
    pair = standard_pair(Z, identity(2))
    with pytest.raises(ValueError):
        check_transform(((1, 1), (0, 1)), pair, {1}, Z)


# operators and flags

def test_operator_examples():
    Z = gl_zip_datum(3, 1, 2)
    f = Z.z
    full = {1, 2, 3}
    assert v_op(full, f, Z) == Z.V2
    assert v_op(set(), f, Z) == frozenset()
    assert v_op({1, 3}, f, Z) == frozenset()
    assert finv_op(set(), f, Z) == Z.V2
    assert finv_op(full, f, Z) == frozenset(full)
    assert finv_op({3}, f, Z) == {1, 3}


subsets = st.sets(st.integers(1, 5))


@settings(max_examples=200)
@given(st.permutations(range(1, 6)), st.integers(1, 4), subsets, subsets)
def test_operators_are_monotone(images, d, A, B):
    Z = gl_zip_datum(5, d, 2)
    f = Permutation(tuple(images))
    small, big = A & B, A | B
    assert v_op(small, f, Z) <= v_op(big, f, Z) <= Z.V2
    assert Z.V2 <= finv_op(small, f, Z) <= finv_op(big, f, Z)


def test_canonical_flag_examples():
    Z = gl_zip_datum(2, 1, 2)
    assert canonical_flag(Z, identity(2)).index_sets() == [[], [2], [1, 2]]
    Z = gl_zip_datum(3, 1, 2)
    assert canonical_flag(Z, identity(3)).index_sets() == [[], [3], [1, 3], [1, 2, 3]]
    Z = gl_zip_datum(4, 2, 2)
    flag = canonical_flag(Z, identity(4))
    assert flag.index_sets() == [[], [3, 4], [1, 2, 3, 4]]
    assert flag.block_sizes() == (2, 2)


@pytest.mark.parametrize("nd", sorted(FLAGS))
def test_canonical_flags_match_frozen_oracle(nd):
    Z = gl_zip_datum(*nd, 2)
    got = {str(w): canonical_flag(Z, w).index_sets()[1:-1] for w in stratum_parameters(Z)}
    assert got == FLAGS[nd]


@pytest.mark.parametrize("n,d", MEDIUM)
def test_canonical_flag_is_the_coarsest_stable_flag(n, d):
    Z = gl_zip_datum(n, d, 2)
    for w in stratum_parameters(Z):
        flag = canonical_flag(Z, w)
        assert is_stable(flag.chain, Z.z * w, Z)
        assert exhaustive_coarsest_flag(Z, w) == flag
        P_f, blocks = flag_stabilizer(Z, flag)
        data = canonical_data(Z, w)
        assert borel_z(Z) <= P_f
        assert P_f == data.Pw and blocks == data.blocks


def test_exhaustive_oracle_size_bound():
    assert sum(1 for _ in ordered_set_partitions(5)) == 541
    Z = gl_zip_datum(6, 3, 2)
    with pytest.raises(ValueError):
        exhaustive_coarsest_flag(Z, identity(6))


def test_flag_stabilizer_examples():
    Z = gl_zip_datum(3, 1, 2)
    trivial = CoordinateFlag(3, (set(), {1, 2, 3}))
    assert flag_stabilizer(Z, trivial)[0].roots == all_roots(3)
    complete = CoordinateFlag(3, (set(), {3}, {1, 3}, {1, 2, 3}))
    assert flag_stabilizer(Z, complete)[0] == borel_z(Z)
    Z = gl_zip_datum(4, 2, 2)
    P_f, blocks = flag_stabilizer(Z, CoordinateFlag(4, (set(), {3, 4}, {1, 2, 3, 4})))
    assert P_f == Z.P
    assert blocks == ({3, 4}, {1, 2})


def test_coordinate_flag_validation():
    with pytest.raises(ValueError):
        CoordinateFlag(3, (set(), {1}, {1}, {1, 2, 3}))
    with pytest.raises(ValueError):
        CoordinateFlag(3, ({1}, {1, 2, 3}))
    assert str(CoordinateFlag(2, (set(), {2}, {1, 2}))) == "{} < {2} < {1,2}"


@pytest.mark.parametrize("n,d", SMALL)
def test_flag_conjugation_by_permutations_in_P(n, d):
    """For a permutation M in P: Fl(M f M^{-1}) = M Fl(f)."""
    Z = gl_zip_datum(n, d, 2)
    in_levi = [M for M in all_permutations(n)
               if all((M(i) in Z.V2) == (i in Z.V2) for i in range(1, n + 1))]
    for w in stratum_parameters(Z):
        f = Z.z * w
        flag = flag_closure(f, Z)
        for M in in_levi:
            moved = flag_closure(M * f * M.inverse(), Z)
            assert moved.chain == tuple(frozenset(M(i) for i in W) for W in flag.chain)


def _as_subspaces(F, flag, n):
    return [span(F, [tuple(1 if i == s else 0 for i in range(1, n + 1)) for s in W], n)
            for W in flag.chain]


@pytest.mark.parametrize("n,d", SMALL)
def test_linear_flag_of_standard_pair_is_the_coordinate_flag(n, d):
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, 2)
    for w in stratum_parameters(Z):
        pair = standard_pair(Z, w, k=2)
        assert linear_canonical_flag(pair) == _as_subspaces(F, canonical_flag(Z, w), n)


@pytest.mark.parametrize("n,d", SMALL)
def test_linear_flag_engines_agree_and_ignore_V(n, d):
    Z = gl_zip_datum(n, d, 2)
    F = GF.get(2, 2)
    rng = random.Random(7)
    for _ in range(10):
        f = random_invertible(F, n, rng)
        expected = linear_canonical_flag(pair_from_matrix(Z, f, 2))
        assert lemma_flag(f, Z, 2) == expected
        # right multiplication by V does not move the flag
        v = tuple(tuple(1 if i == j else (rng.randrange(F.q) if (i + 1, j + 1) in
                                           {(r.source, r.target) for r in Z.V} else 0)
                        for j in range(n)) for i in range(n))
        assert in_V(v, Z)
        assert lemma_flag(F.matmul(f, v), Z, 2) == expected


def test_pair_membership():
    Z = gl_zip_datum(3, 1, 2)
    pair = standard_pair(Z, identity(3))
    assert pair.in_X() and pair.in_Y()
    broken = DieudonnePair(pair.a, pair.a, 1, 2)
    assert not broken.in_X()
