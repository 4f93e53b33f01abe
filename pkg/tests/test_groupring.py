from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from l2chi.intmat import det, identity, image_lattice_basis, matmul, matvec, smith_normal_form, complete_to_unimodular
from l2chi.ring.groupring import AbelianGroup, GroupRingElement, PolyZGroup

vec2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
polyz_elt = st.tuples(vec2, st.integers(-3, 3))
CAT = PolyZGroup([[2, 1], [1, 1]])


@given(polyz_elt, polyz_elt, polyz_elt)
def test_polyz_group_law(g, h, k):
    assert CAT.mul(CAT.mul(g, h), k) == CAT.mul(g, CAT.mul(h, k))
    assert CAT.is_identity(CAT.mul(g, CAT.inv(g)))
    assert CAT.mul(g, CAT.identity()) == CAT.validate(g)


def test_polyz_semidirect_rule():
    # (v, m)(v', m') = (v + A^m v', m + m')
    g, h = ((1, 0), 1), ((0, 1), 0)
    assert CAT.mul(g, h) == ((1 + 1, 1), 1)


def test_polyz_rejects_non_unimodular():
    with pytest.raises(ValueError):
        PolyZGroup([[2, 0], [0, 1]])


@given(st.lists(st.tuples(polyz_elt, st.integers(-2, 2)), max_size=3),
       st.lists(st.tuples(polyz_elt, st.integers(-2, 2)), max_size=3),
       st.lists(st.tuples(polyz_elt, st.integers(-2, 2)), max_size=3))
def test_group_ring_associative(a, b, c):
    x, y, z = (GroupRingElement(CAT, dict(t)) for t in (a, b, c))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


def test_group_ring_augmentation():
    g = AbelianGroup(2)
    x = GroupRingElement(g, {(1, 0): 2, (0, 1): -5})
    assert x.augmentation() == -3


def _mat(rows, cols, lo=-4, hi=4):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: _mat(r, c))))
def test_smith_normal_form(m):
    divisors, left, right = smith_normal_form(m)
    d = matmul(matmul(left, m), right)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            assert x == (divisors[i] if i == j and i < len(divisors) else 0)
    assert all(b % a == 0 for a, b in zip(divisors, divisors[1:]))
    assert abs(det(left)) == 1 and abs(det(right)) == 1


@given(st.lists(st.integers(-7, 7), min_size=1, max_size=4))
def test_complete_to_unimodular(v):
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        with pytest.raises(ValueError):
            complete_to_unimodular(v)
        return
    b = complete_to_unimodular(v)
    assert b[-1] == list(v)
    assert det(b) in (1, -1)


def test_complete_to_unimodular_example():
    # phi = (2, 3): the completion is unimodular with phi as its last row
    b = complete_to_unimodular([2, 3])
    assert abs(det(b)) == 1 and b[1] == [2, 3]


@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                                                    min_size=1, max_size=4)))
def test_image_lattice_basis(vectors):
    n = len(vectors[0])
    basis, coords = image_lattice_basis(vectors, n)
    for v, c in zip(vectors, coords):
        assert tuple(v) == tuple(sum(ci * b[k] for ci, b in zip(c, basis)) for k in range(n))


def test_matvec_identity():
    assert matvec(identity(3), (1, 2, 3)) == (1, 2, 3)
