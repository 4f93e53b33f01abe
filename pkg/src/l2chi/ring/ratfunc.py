"""The rational function field Q(t_1, ..., t_k) with a canonical form.

A field element is stored as ``num / den`` where

* ``num`` is a Laurent polynomial (negative exponents allowed),
* ``den`` is an ordinary polynomial with no monomial factor and graded-lex
  leading coefficient 1,
* ``gcd(num, den) = 1``.

Units of the Laurent ring (``c * t^v``) are thereby pushed into the
numerator, so two constructions of the same element are structurally equal.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Mapping

from l2chi.ring.laurent import (
    ONE,
    Exp,
    LaurentPoly,
    Poly,
    format_poly,
    is_constant,
    leading_coefficient,
    make_monic,
    min_exponents,
    padd,
    pdivexact,
    pgcd,
    pmul,
    pneg,
    pscale,
    pshift,
)


class RationalFunction:
    __slots__ = ("nvars", "num", "den", "_hash")

    def __init__(self, nvars: int, num: Mapping[Exp, Fraction], den: Mapping[Exp, Fraction] | None = None):
        self.nvars = nvars
        if den is None:
            self.num = dict(num)
            self.den = {(0,) * nvars: ONE}
        else:
            if not den:
                raise ZeroDivisionError("rational function with zero denominator")
            self.num, self.den = _normalize(nvars, dict(num), dict(den))
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, num: Poly, den: Poly) -> "RationalFunction":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, nvars: int, c) -> "RationalFunction":
        c = Fraction(c)
        one = {(0,) * nvars: ONE}
        return cls._raw(nvars, {(0,) * nvars: c} if c else {}, one)

    @classmethod
    def zero(cls, nvars: int) -> "RationalFunction":
        return cls.constant(nvars, 0)

    @classmethod
    def one(cls, nvars: int) -> "RationalFunction":
        return cls.constant(nvars, 1)

    @classmethod
    def from_laurent(cls, f: LaurentPoly) -> "RationalFunction":
        return cls._raw(f.nvars, dict(f.terms), {(0,) * f.nvars: ONE})

    @classmethod
    def monomial(cls, exps: Exp, c=1) -> "RationalFunction":
        n = len(exps)
        c = Fraction(c)
        return cls._raw(n, {tuple(exps): c} if c else {}, {(0,) * n: ONE})

    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_laurent(self) -> bool:
        return is_constant(self.den)

    def is_monomial(self) -> bool:
        """True for units of the Laurent ring, ``c * t^v``."""
        return len(self.num) == 1 and is_constant(self.den)

    def numerator(self) -> LaurentPoly:
        return LaurentPoly._raw(self.nvars, dict(self.num))

    def denominator(self) -> LaurentPoly:
        return LaurentPoly._raw(self.nvars, dict(self.den))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(self.nvars, other)
        if isinstance(other, LaurentPoly):
            return RationalFunction.from_laurent(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            if is_constant(self.den):
                return RationalFunction._raw(self.nvars, padd(self.num, other.num), self.den)
            return _make(self.nvars, padd(self.num, other.num), self.den)
        num = padd(pmul(self.num, other.den), pmul(other.num, self.den))
        return _make(self.nvars, num, pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(self.nvars, pneg(self.num), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return RationalFunction.zero(self.nvars)
        if is_constant(self.den) and is_constant(other.den):
            return RationalFunction._raw(self.nvars, pmul(self.num, other.num), self.den)
        # cross-cancel before multiplying keeps the gcd work small
        n1, d2 = _cancel(self.num, other.den)
        n2, d1 = _cancel(other.num, self.den)
        return _make(self.nvars, pmul(n1, n2), pmul(d1, d2), reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return _make(self.nvars, dict(self.den), dict(self.num), reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = RationalFunction.one(self.nvars)
        for _ in range(abs(k)):
            out = out * base
        return out

    def substitute_monomials(self, matrix) -> "RationalFunction":
        """Apply the monomial map ``t^e -> t^(M e)`` (``M`` unimodular)."""
        num = _subst(self.num, matrix)
        if is_constant(self.den):
            return RationalFunction._raw(self.nvars, num, self.den)
        return _make(self.nvars, num, _subst(self.den, matrix), reduced=True)

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.constant(self.nvars, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.nvars == other.nvars and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def size(self) -> int:
        """Rough storage size in bits, used by the coefficient-growth guard."""
        bits = 0
        for part in (self.num, self.den):
            for c in part.values():
                bits += c.numerator.bit_length() + c.denominator.bit_length() + 8 * self.nvars
        return bits

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        n = format_poly(self.num)
        if is_constant(self.den):
            return n
        return f"({n})/({format_poly(self.den)})"


def _cancel(num: Poly, den: Poly):
    """Remove ``gcd(num, den)`` from a numerator/denominator pair."""
    if is_constant(den) or not num:
        return num, den
    n = len(next(iter(den)))
    lo = min_exponents(num, n)
    shifted = pshift(num, tuple(-x for x in lo))
    g = pgcd(shifted, den)
    if is_constant(g):
        return num, den
    return pshift(pdivexact(shifted, g), lo), pdivexact(den, g)


def _make(nvars: int, num: Poly, den: Poly, reduced: bool = False) -> RationalFunction:
    if not num:
        return RationalFunction.zero(nvars)
    if not reduced:
        num, den = _cancel(num, den)
    num, den = _finish(nvars, num, den)
    return RationalFunction._raw(nvars, num, den)


def _normalize(nvars: int, num: Poly, den: Poly):
    if not num:
        return {}, {(0,) * nvars: ONE}
    # a Laurent denominator is allowed on input; fold its monomial part first
    lo = min_exponents(den, nvars)
    if any(lo):
        den = pshift(den, tuple(-x for x in lo))
        num = pshift(num, tuple(-x for x in lo))
    num, den = _cancel(num, den)
    return _finish(nvars, num, den)


def _finish(nvars: int, num: Poly, den: Poly):
    lo = min_exponents(den, nvars)
    if any(lo):
        den = pshift(den, tuple(-x for x in lo))
        num = pshift(num, tuple(-x for x in lo))
    lc = leading_coefficient(den)
    if lc != 1:
        inv = 1 / lc
        den = pscale(den, inv)
        num = pscale(num, inv)
    return num, den


def _subst(f: Poly, matrix) -> Poly:
    out: Poly = {}
    n = len(matrix)
    for e, c in f.items():
        k = tuple(sum(matrix[i][j] * e[j] for j in range(n)) for i in range(n))
        out[k] = out.get(k, 0) + c
    return {e: c for e, c in out.items() if c}



def content_normalizer(values) -> RationalFunction:
    """A nonzero ``d`` such that every ``d * v`` is a Laurent polynomial with
    integer coefficients and the family has no common factor (monomials and
    integer content included)."""
    values = [v for v in values if v.num]
    if not values:
        raise ValueError("content of an all-zero family")
    nvars = values[0].nvars
    lcm: Poly = {(0,) * nvars: ONE}
    for v in values:
        if not is_constant(v.den):
            g = pgcd(lcm, v.den)
            lcm = pmul(lcm, pdivexact(v.den, g))
    scaled = [pmul(v.num, pdivexact(lcm, v.den)) for v in values]
    lo = list(min_exponents(scaled[0], nvars))
    for p in scaled[1:]:
        lo = [min(a, b) for a, b in zip(lo, min_exponents(p, nvars))]
    shift = tuple(-x for x in lo)
    shifted = [pshift(p, shift) for p in scaled]
    g = make_monic(shifted[0])
    for p in shifted[1:]:
        if is_constant(g):
            break
        g = pgcd(g, p)
    quot = [pdivexact(p, g) for p in shifted] if not is_constant(g) else shifted
    # rational constant making the coefficients coprime integers
    den = 1
    num = 0
    for p in quot:
        for c in p.values():
            den = den * c.denominator // gcd(den, c.denominator)
    for p in quot:
        for c in p.values():
            num = gcd(num, int(c * den))
    scale = Fraction(den, num)
    out_num = pscale(pshift(lcm, shift), scale)
    return _make(nvars, out_num, g if not is_constant(g) else {(0,) * nvars: ONE})
