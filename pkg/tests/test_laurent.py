from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import l2chi.ring.laurent as lp
from l2chi.ring.laurent import LaurentPoly, pdivexact, pgcd, pmul
from strategies import laurent, nonzero_laurent


@given(laurent(2), laurent(2), laurent(2))
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == LaurentPoly(2, {})


@given(nonzero_laurent(2), nonzero_laurent(2))
def test_product_has_no_zero_divisors(f, g):
    assert f * g


def test_monomials_are_units():
    t = LaurentPoly.variable(1, 0)
    assert t * t ** -1 == LaurentPoly.constant(1, 1)
    assert (t ** -2).min_exponents() == (-2,)


def test_printing():
    f = LaurentPoly(1, {(2,): 1, (1,): -3, (0,): 1})
    assert str(f) == "t^2 - 3*t + 1"


@given(nonzero_laurent(2, lo=0, max_terms=3), nonzero_laurent(2, lo=0, max_terms=3))
def test_exact_division(f, g):
    assert pdivexact(pmul(f.terms, g.terms), g.terms) == f.terms


def test_inexact_division_raises():
    f = {(2,): Fraction(1), (0,): Fraction(1)}
    g = {(1,): Fraction(1), (0,): Fraction(1)}
    with pytest.raises(ArithmeticError):
        pdivexact(f, g)


@given(nonzero_laurent(2, lo=0, max_terms=3), nonzero_laurent(2, lo=0, max_terms=3),
       nonzero_laurent(2, lo=0, max_terms=3))
def test_gcd_divides_and_contains_common_factor(a, b, c):
    f, g = pmul(a.terms, c.terms), pmul(b.terms, c.terms)
    d = pgcd(f, g)
    pdivexact(f, d)
    pdivexact(g, d)
    pdivexact(d, c.terms)  # c divides both, hence the gcd


@pytest.mark.parametrize("nvars", [1, 2, 3])
def test_pure_python_gcd_matches_flint(monkeypatch, rng, nvars):
    """The subresultant fallback agrees with the library gcd."""
    if lp.flint is None:
        pytest.skip("python-flint not installed")

    def rand(terms):
        return {tuple(rng.randint(0, 2) for _ in range(nvars)): Fraction(rng.randint(-3, 3) or 1) for _ in range(terms)}

    cases = []
    for _ in range(15):
        c = rand(rng.randint(1, 3))
        cases.append((pmul(rand(rng.randint(1, 3)), c), pmul(rand(rng.randint(1, 3)), c)))
    expected = [pgcd(f, g) for f, g in cases]
    monkeypatch.setattr(lp, "flint", None)
    assert [pgcd(f, g) for f, g in cases] == expected


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4))
def test_univariate_gcd_of_powers(exps):
    # gcd of (t+1)^a t^b with (t+1)^c is (t+1)^min(a, c)
    t1 = LaurentPoly(1, {(1,): 1, (0,): 1})
    a = abs(exps[0]) % 4
    c = abs(exps[-1]) % 4
    d = pgcd((t1 ** a).terms, (t1 ** c).terms)
    assert d == (t1 ** min(a, c)).terms
