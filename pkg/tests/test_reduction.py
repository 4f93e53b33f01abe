from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from l2chi.oracles import field_rank, window_coker_dim
from l2chi.reduction import (
    NotInjectiveError,
    SizeGuardError,
    coker_dim,
    diagonalize,
    dieudonne_det,
    ik_bound_check,
    shifted_identity_matrix,
)
from l2chi.ring.ratfunc import RationalFunction
from l2chi.skew import SkewLaurentPoly, Twist, random_element, random_field_element
from strategies import TWISTS, skew

K0 = Twist.untwisted(0)
K1 = Twist.untwisted(1)


def poly(tw, coeffs):
    return SkewLaurentPoly(tw, coeffs)


def test_empty_matrix():
    res = diagonalize([])
    assert res.injective and res.diagonal == []


def test_already_diagonal():
    m = [[poly(K1, {1: 1}), poly(K1, {})], [poly(K1, {}), poly(K1, {2: 1})]]
    res = diagonalize(m)
    assert res.injective and res.degrees() == [0, 0]


def test_unit_entries_have_trivial_cokernel():
    # u is a unit of the Laurent ring, so [[u, 1], [0, u]] is invertible
    u = poly(K0, {1: 1})
    m = [[u, poly(K0, {0: 1})], [poly(K0, {}), u]]
    assert coker_dim(m) == 0 == window_coker_dim(m)


def test_jordan_block_cokernel():
    v = poly(K0, {1: 1, 0: 1})
    m = [[v, poly(K0, {0: 1})], [poly(K0, {}), v]]
    assert coker_dim(m) == 2 == window_coker_dim(m)


def test_alexander_entry():
    assert coker_dim([[poly(K0, {2: 1, 1: -1, 0: 1})]]) == 2


def test_zero_is_not_injective():
    with pytest.raises(NotInjectiveError):
        coker_dim([[poly(K1, {})]])
    with pytest.raises(NotInjectiveError):
        dieudonne_det([[poly(K1, {1: 1}), poly(K1, {1: 1})], [poly(K1, {0: 2}), poly(K1, {0: 2})]])


def test_rejects_non_square():
    with pytest.raises(ValueError):
        diagonalize([[poly(K1, {0: 1}), poly(K1, {0: 1})]])


def test_diagonal_det():
    d1, d2 = poly(K1, {0: 1, 1: 2}), poly(K1, {0: 3, 2: 1})
    det, deg = dieudonne_det([[d1, poly(K1, {})], [poly(K1, {}), d2]])
    assert det == d1 * d2 and deg == 3


def _cofactor_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


@pytest.mark.parametrize("form", ["triangular", "diagonal"])
def test_commutative_det_equals_cofactor(form):
    rng = random.Random(31)
    checked = 0
    for _ in range(40):
        n = rng.randint(1, 3)
        m = [[random_element(rng, K1, span=1, coeff_terms=2) for _ in range(n)] for _ in range(n)]
        det = _cofactor_det(m)
        res = diagonalize(m, form=form)
        assert res.injective == bool(det)
        if det:
            checked += 1
            assert res.det_class == det
            assert sum(res.degrees()) == det.degree()
    assert checked > 20


def test_op_log_replays_to_the_result():
    rng = random.Random(32)
    for tw in TWISTS:
        m = [[random_element(rng, tw, span=1, coeff_terms=1, denominators=False) for _ in range(3)]
             for _ in range(3)]
        for form in ("triangular", "diagonal"):
            res = diagonalize(m, form=form)
            work = [list(r) for r in m]
            for op in res.ops:
                op.apply(work)
            assert [work[i][i] for i in range(3)] == res.diagonal
            if form == "diagonal" and res.injective:
                assert all(not work[i][j] for i in range(3) for j in range(3) if i != j)
            if form == "triangular":
                assert all(not work[i][j] for i in range(3) for j in range(i))


def test_op_prefixes_preserve_cokernel():
    rng = random.Random(33)
    for tw in TWISTS[:4]:
        while True:
            m = [[random_element(rng, tw, span=1, coeff_terms=1, denominators=False) for _ in range(2)]
                 for _ in range(2)]
            res = diagonalize(m)
            if res.injective and res.ops:
                break
        want = sum(res.degrees())
        work = [list(r) for r in m]
        for op in res.ops:
            op.apply(work)
            assert window_coker_dim(work) == want


@pytest.mark.parametrize("tw", TWISTS, ids=lambda tw: "x".join(map(str, tw.matrix)))
def test_strategies_and_forms_agree(tw):
    rng = random.Random(34)
    for _ in range(4):
        m = [[random_element(rng, tw, span=1, coeff_terms=1, denominators=False) for _ in range(3)]
             for _ in range(3)]
        results = [diagonalize(m, strategy=s, form=f) for s in ("min-degree", "min-degree-last", "first")
                   for f in ("triangular", "diagonal")]
        assert len({r.injective for r in results}) == 1
        if results[0].injective:
            assert len({sum(r.degrees()) for r in results}) == 1
            assert len({r.det_class.degree() for r in results}) == 1


def test_transpose_invariance_commutative():
    rng = random.Random(35)
    for _ in range(20):
        m = [[random_element(rng, K1, span=1) for _ in range(3)] for _ in range(3)]
        mt = [list(r) for r in zip(*m)]
        a, b = diagonalize(m), diagonalize(mt)
        assert a.injective == b.injective
        if a.injective:
            assert sum(a.degrees()) == sum(b.degrees())


@settings(max_examples=40)
@given(st.sampled_from(TWISTS).flatmap(lambda tw: skew(tw, span=3, nonzero=True)))
def test_one_by_one_cokernel_is_degree(x):
    assert coker_dim([[x]]) == x.degree() == window_coker_dim([[x]])


def test_window_oracle_matches_on_matrices():
    rng = random.Random(36)
    count = 0
    for i in range(40):
        tw = TWISTS[i % len(TWISTS)]
        m = [[random_element(rng, tw, span=1, coeff_terms=1, denominators=False) for _ in range(2)]
             for _ in range(2)]
        res = diagonalize(m)
        if res.injective:
            count += 1
            assert sum(res.degrees()) == window_coker_dim(m) == res.det_class.degree()
    assert count > 20


def test_field_rank():
    t = RationalFunction.monomial((1,))
    one = RationalFunction.one(1)
    zero = RationalFunction.zero(1)
    assert field_rank([[t, one], [t * t, t]]) == 1
    assert field_rank([[t, one], [one, t]]) == 2
    assert field_rank([[zero, zero]]) == 0


def test_size_guard():
    rng = random.Random(37)
    m = [[random_element(rng, K1, span=2) for _ in range(3)] for _ in range(3)]
    with pytest.raises(SizeGuardError):
        diagonalize(m, limit_bytes=1)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        diagonalize([[poly(K1, {0: 1})]], strategy="random")


def test_ik_bound_examples():
    one = RationalFunction.one(1)
    zero = RationalFunction.zero(1)
    ident = [[one, zero], [zero, one]]
    assert ik_bound_check(ident, 0, K1).dimension == 0
    report = ik_bound_check(ident, 2, K1)
    assert report.injective and report.dimension <= 2
    with pytest.raises(ValueError):
        shifted_identity_matrix(ident, 3, K1)


@pytest.mark.parametrize("tw", [Twist.untwisted(1), Twist([[-1]])], ids=["plain", "flip"])
def test_ik_bound_random(tw):
    rng = random.Random(38)
    for _ in range(25):
        n = rng.randint(1, 4)
        k = rng.randint(0, n)
        a = [[random_field_element(rng, 1, 2, 3, True) for _ in range(n)] for _ in range(n)]
        report = ik_bound_check(a, k, tw)
        assert report.holds
