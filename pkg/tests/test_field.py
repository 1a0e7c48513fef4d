from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from zipstrata.field import CONWAY, GF


def _has_factor(p, poly):
    """Brute force: does the monic ``poly`` have a monic factor of degree 1..deg/2?"""
    k = len(poly) - 1
    for deg in range(1, k // 2 + 1):
        for low in product(range(p), repeat=deg):
            div = list(low) + [1]
            rem = list(poly)
            for shift in range(k - deg, -1, -1):
                c = rem[shift + deg]
                if c:
                    for i, di in enumerate(div):
                        rem[shift + i] = (rem[shift + i] - c * di) % p
            if not any(rem):
                return True
    return False


@pytest.mark.parametrize("pk", sorted(CONWAY))
def test_frozen_moduli_are_irreducible(pk):
    p, k = pk
    assert CONWAY[pk][-1] == 1
    assert not _has_factor(p, CONWAY[pk])


@pytest.mark.parametrize("pk", [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)])
def test_frobenius_is_an_automorphism_of_order_k(pk):
    F = GF.get(*pk)
    images = [F.frob(x) for x in F.elements()]
    assert sorted(images) == list(F.elements())
    for x in F.elements():
        assert F.frob(x, F.k) == x
        assert F.frob(F.frob(x), -1) == x
        assert F.frob(x, -1) == F.frob(x, F.k - 1)
    if F.k > 1:
        assert any(F.frob(x, j) != x for x in F.elements() for j in range(1, F.k))


def test_multiplicative_group_is_cyclic_of_order_q_minus_1():
    F = GF.get(2, 3)
    orders = []
    for x in F.units():
        y, k = x, 1
        while y != 1:
            y, k = F.mul(y, x), k + 1
        orders.append(k)
    assert max(orders) == 7


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        GF.get(2, 2).inv(0)


def test_unknown_field_rejected():
    with pytest.raises(ValueError):
        GF(7, 1)


F4 = GF.get(2, 2)
elements = st.integers(0, F4.q - 1)


@given(elements, elements, elements)
def test_field_axioms_gf4(x, y, z):
    F = F4
    assert F.add(x, y) == F.add(y, x)
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
    assert F.sub(F.add(x, y), y) == x
    assert F.frob(F.mul(x, y)) == F.mul(F.frob(x), F.frob(y))
    assert F.frob(F.add(x, y)) == F.add(F.frob(x), F.frob(y))
    if x:
        assert F.mul(x, F.inv(x)) == 1


matrices = st.lists(st.lists(elements, min_size=3, max_size=3), min_size=3, max_size=3)


@settings(max_examples=60)
@given(matrices)
def test_inverse_and_nullspace(m):
    F = F4
    a = tuple(tuple(r) for r in m)
    null = F.nullspace(a)
    assert F.rank(a) + len(null) == 3
    for v in null:
        assert all(row == (0,) for row in F.matmul(a, tuple((c,) for c in v)))
    if F.is_invertible(a):
        assert F.matmul(a, F.inverse(a)) == F.eye(3)
        b = (1, 2, 3)
        x = F.solve(a, b)
        assert tuple(r[0] for r in F.matmul(a, tuple((c,) for c in x))) == b
    else:
        with pytest.raises(ZeroDivisionError):
            F.inverse(a)
