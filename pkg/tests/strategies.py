"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from l2chi.ring.laurent import LaurentPoly
from l2chi.ring.ratfunc import RationalFunction
from l2chi.skew import SkewLaurentPoly, Twist

small = st.integers(-3, 3)


def laurent(nvars: int, lo: int = -2, hi: int = 2, max_terms: int = 4):
    exps = st.tuples(*[st.integers(lo, hi)] * nvars)
    return st.dictionaries(exps, small.filter(bool), max_size=max_terms).map(lambda d: LaurentPoly(nvars, d))


def nonzero_laurent(nvars: int, **kw):
    return laurent(nvars, **kw).filter(bool)


def ratfunc(nvars: int):
    num = laurent(nvars, max_terms=3)
    den = nonzero_laurent(nvars, lo=0, hi=2, max_terms=2)
    return st.tuples(num, den).map(lambda p: RationalFunction(nvars, p[0].terms, p[1].terms))


def nonzero_ratfunc(nvars: int):
    return ratfunc(nvars).filter(bool)


TWISTS = [
    Twist.untwisted(1),
    Twist([[-1]]),
    Twist.untwisted(2),
    Twist([[0, -1], [1, 0]]),
    Twist([[1, 1], [0, 1]]),
]


@st.composite
def skew(draw, twist: Twist, span: int = 2, nonzero: bool = False):
    lo = draw(st.integers(-2, 2))
    coeffs = draw(st.dictionaries(st.integers(lo, lo + span), ratfunc(twist.k).filter(bool), max_size=span + 1))
    if nonzero and not coeffs:
        coeffs = {lo: RationalFunction.constant(twist.k, Fraction(1))}
    return SkewLaurentPoly(twist, coeffs)
