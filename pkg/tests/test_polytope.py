from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from l2chi.polytope import (
    IntegralPolytope,
    PolytopeDifference,
    d_eval,
    minkowski_sum,
    newton_polytope,
    polytope_of_unit,
    seminorm_eval,
)
from l2chi.ring.laurent import LaurentPoly
from l2chi.ring.ratfunc import RationalFunction
from l2chi.simplex import feasible_point, in_convex_hull


def points(dim, lo=-4, hi=4, max_size=10):
    return st.lists(st.tuples(*[st.integers(lo, hi)] * dim), min_size=1, max_size=max_size)


def _in_triangle(p, a, b, c):
    if _orient(a, b, c) == 0:
        return False
    d1, d2, d3 = (_orient(a, b, p), _orient(b, c, p), _orient(c, a, p))
    neg = d1 < 0 or d2 < 0 or d3 < 0
    pos = d1 > 0 or d2 > 0 or d3 > 0
    return not (neg and pos)


def _orient(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b):
    return (_orient(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def brute_extreme_2d(pts):
    pts = sorted(set(pts))
    out = []
    for p in pts:
        others = [q for q in pts if q != p]
        inside = any(_on_segment(p, a, b) for a, b in combinations(others, 2)) or any(
            _in_triangle(p, a, b, c) for a, b, c in combinations(others, 3))
        if not inside:
            out.append(p)
    return out


@given(points(2))
def test_hull_2d_matches_brute_force(pts):
    assert list(IntegralPolytope(pts).vertices) == brute_extreme_2d(pts)


@given(points(3, -2, 2, 8))
def test_hull_is_idempotent_and_extreme(pts):
    p = IntegralPolytope(pts)
    assert IntegralPolytope(p.vertices) == p
    for v in p.vertices:
        assert not in_convex_hull(v, [w for w in p.vertices if w != v])
    for q in pts:
        assert in_convex_hull(q, list(p.vertices))


def test_cube_with_interior_points():
    cube = list(product((0, 2), repeat=3))
    extra = [(1, 1, 1), (0, 1, 1), (1, 0, 2), (2, 2, 1)]
    assert IntegralPolytope(cube + extra).vertices == tuple(sorted(cube))


def test_one_dimensional_and_point():
    assert IntegralPolytope([(3,), (-1,), (0,)]).vertices == ((-1,), (3,))
    assert IntegralPolytope.point((2, 5)).is_point()


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        IntegralPolytope([(0,) * 7])
    with pytest.raises(ValueError):
        IntegralPolytope([(Fraction(1, 2), 0)])
    with pytest.raises(ValueError):
        IntegralPolytope([])
    with pytest.raises(ValueError):
        IntegralPolytope([(0, 0), (1,)])
    with pytest.raises(ValueError):
        minkowski_sum(IntegralPolytope.zero(1), IntegralPolytope.zero(2))
    with pytest.raises(ValueError):
        seminorm_eval(IntegralPolytope.zero(2), [1])


def test_seminorm():
    square = IntegralPolytope(product((0, 1), repeat=2))
    assert seminorm_eval(square, [1, 0]) == Fraction(1, 2)
    assert seminorm_eval(square, [1, 1]) == 1
    assert seminorm_eval(square, [1, -1]) == 1
    assert seminorm_eval(IntegralPolytope.point((4, 4)), [3, 7]) == 0


@given(points(2, max_size=6), points(2, max_size=6), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_minkowski_sum_and_seminorm(a, b, phi):
    p, q = IntegralPolytope(a), IntegralPolytope(b)
    s = p + q
    assert s == q + p
    assert s == IntegralPolytope([tuple(x + y for x, y in zip(u, v)) for u in a for v in b])
    assert seminorm_eval(s, phi) == seminorm_eval(p, phi) + seminorm_eval(q, phi)


@given(points(2, max_size=5), points(2, max_size=5), points(2, max_size=5))
def test_difference_group(a, b, c):
    p, q, r = (PolytopeDifference(IntegralPolytope(x)) for x in (a, b, c))
    zero = PolytopeDifference.zero(2)
    assert (p + q) + r == p + (q + r)
    assert p + zero == p
    assert p - p == zero
    assert p + q - q == p
    # translation is invisible in the group up to a point class
    shifted = PolytopeDifference(IntegralPolytope(a).translate((5, -2)), IntegralPolytope.point((5, -2)))
    assert shifted == p


def test_polytope_of_unit():
    x = LaurentPoly(2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
    y = LaurentPoly(2, {(0, 0): 1, (1, 1): -1})
    z = RationalFunction(2, x.terms) / RationalFunction(2, y.terms)
    d = polytope_of_unit(z)
    assert d == PolytopeDifference(newton_polytope(x), newton_polytope(y))
    assert d_eval(d, [1, 0]) == Fraction(1, 2) - Fraction(1, 2)
    assert d_eval(d, [1, -1]) == Fraction(1, 1)
    assert polytope_of_unit((x, y)) == d
    with pytest.raises(ValueError):
        polytope_of_unit(LaurentPoly(2, {}))


def test_feasible_point():
    x = feasible_point([[1, 1], [1, -1]], [2, 0])
    assert x == [1, 1]
    assert feasible_point([[1, 1]], [-1]) is None
    assert feasible_point([[1, 2]], [Fraction(1, 2)]) is not None
    assert not in_convex_hull((0, 0), [])
    assert in_convex_hull((1, 1), [(0, 0), (2, 2)])
    assert not in_convex_hull((1, 0), [(0, 0), (2, 2)])
