"""Twisted Laurent polynomials D_t[u^{+-1}] over D = Q(t_1, ..., t_k).

The twist is the field automorphism induced by a unimodular integer matrix
``A`` acting on exponent vectors, ``t^v -> t^(A v)``, and multiplication obeys
``u^m * f = sigma^m(f) * u^m``.  ``A = identity`` gives the commutative ring;
it is the same type and the same code path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from l2chi.intmat import MatrixPowers, identity
from l2chi.ring.laurent import LaurentPoly
from l2chi.ring.ratfunc import RationalFunction


class Twist:
    def __init__(self, matrix, power_cache: int = 64):
        self.matrix = tuple(tuple(int(x) for x in r) for r in matrix)
        self.k = len(self.matrix)
        self.powers = MatrixPowers(self.matrix, power_cache)
        self.is_identity = self.matrix == tuple(tuple(r) for r in identity(self.k))

    @classmethod
    def untwisted(cls, k: int) -> "Twist":
        return cls(identity(k))

    def apply(self, m: int, f: RationalFunction) -> RationalFunction:
        if m == 0 or self.is_identity or self.k == 0:
            return f
        return f.substitute_monomials(self.powers(m))

    def __eq__(self, other):
        return isinstance(other, Twist) and other.matrix == self.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"Twist({[list(r) for r in self.matrix]})"


def apply_twist(twist: Twist, m: int, f: RationalFunction) -> RationalFunction:
    return twist.apply(m, f)


class SkewLaurentPoly:
    """Element ``sum_m c_m u^m`` with coefficients ``c_m`` in Q(t_1..t_k)."""

    __slots__ = ("twist", "coeffs")

    def __init__(self, twist: Twist, coeffs: Mapping[int, object] | None = None):
        self.twist = twist
        clean: Dict[int, RationalFunction] = {}
        for m, c in (coeffs or {}).items():
            c = _as_field(twist.k, c)
            if c.nvars != twist.k:
                raise ValueError(f"coefficient over {c.nvars} variables, twist has {twist.k}")
            if c:
                clean[int(m)] = c
        self.coeffs = clean

    @classmethod
    def _raw(cls, twist: Twist, coeffs: Dict[int, RationalFunction]) -> "SkewLaurentPoly":
        obj = object.__new__(cls)
        obj.twist = twist
        obj.coeffs = coeffs
        return obj

    @classmethod
    def zero(cls, twist: Twist) -> "SkewLaurentPoly":
        return cls._raw(twist, {})

    @classmethod
    def one(cls, twist: Twist) -> "SkewLaurentPoly":
        return cls._raw(twist, {0: RationalFunction.one(twist.k)})

    @classmethod
    def u_power(cls, twist: Twist, m: int, c=1) -> "SkewLaurentPoly":
        return cls(twist, {m: c})

    @classmethod
    def scalar(cls, twist: Twist, c) -> "SkewLaurentPoly":
        return cls(twist, {0: c})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def n_minus(self) -> int:
        return min(self.coeffs)

    @property
    def n_plus(self) -> int:
        return max(self.coeffs)

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("degree of the zero element is undefined")
        return max(self.coeffs) - min(self.coeffs)

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def leading(self) -> Tuple[int, RationalFunction]:
        m = max(self.coeffs)
        return m, self.coeffs[m]

    def size(self) -> int:
        return sum(c.size() for c in self.coeffs.values())

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, SkewLaurentPoly):
            return NotImplemented
        if other.twist is not self.twist and other.twist != self.twist:
            raise ValueError("twisted polynomials with different twists")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return SkewLaurentPoly._raw(self.twist, out)

    def __neg__(self):
        return SkewLaurentPoly._raw(self.twist, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            other = SkewLaurentPoly.scalar(self.twist, other)
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return SkewLaurentPoly.zero(self.twist)
        out: Dict[int, RationalFunction] = {}
        apply = self.twist.apply
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                term = a * apply(i, b)
                s = out.get(i + j)
                out[i + j] = term if s is None else s + term
        return SkewLaurentPoly._raw(self.twist, {m: c for m, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, RationalFunction)):
            return SkewLaurentPoly.scalar(self.twist, other) * self
        return NotImplemented

    def shift(self, m: int) -> "SkewLaurentPoly":
        """Right multiplication by ``u^m``."""
        return SkewLaurentPoly._raw(self.twist, {i + m: c for i, c in self.coeffs.items()})

    def unit_inverse(self) -> "SkewLaurentPoly":
        """Inverse of a unit ``c u^m``: ``sigma^-m(c^-1) u^-m``."""
        if not self.is_unit():
            raise ValueError("element is not a unit")
        (m, c), = self.coeffs.items()
        return SkewLaurentPoly._raw(self.twist, {-m: self.twist.apply(-m, c.inverse())})

    def __eq__(self, other):
        if not isinstance(other, SkewLaurentPoly):
            return NotImplemented
        return self.twist == other.twist and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.twist, frozenset(self.coeffs.items())))

    def __repr__(self):
        return f"SkewLaurentPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for m in sorted(self.coeffs, reverse=True):
            c = self.coeffs[m]
            u = "" if m == 0 else ("u" if m == 1 else f"u^{m}")
            cs = str(c)
            if not u:
                parts.append(cs)
            elif cs == "1":
                parts.append(u)
            elif cs == "-1":
                parts.append("-" + u)
            else:
                parts.append(f"({cs})*{u}")
        return " + ".join(parts).replace("+ -", "- ")


def _as_field(k: int, c) -> RationalFunction:
    if isinstance(c, RationalFunction):
        return c
    if isinstance(c, LaurentPoly):
        return RationalFunction.from_laurent(c)
    return RationalFunction.constant(k, c)


def left_divmod(a: SkewLaurentPoly, b: SkewLaurentPoly):
    """``a = q * b + r`` with ``r = 0`` or ``deg r < deg b``."""
    if not b:
        raise ZeroDivisionError("division by zero twisted polynomial")
    tw = a.twist
    q = SkewLaurentPoly.zero(tw)
    if not a:
        return q, a
    bh, beta = b.leading()
    db = b.degree()
    lo = a.n_minus
    r = a
    while r and r.n_plus >= lo + db:
        p, alpha = r.leading()
        s = p - bh
        term = SkewLaurentPoly._raw(tw, {s: alpha * tw.apply(s, beta).inverse()})
        q = q + term
        r = r - term * b
    return q, r


def right_divmod(a: SkewLaurentPoly, b: SkewLaurentPoly):
    """``a = b * q + r`` with ``r = 0`` or ``deg r < deg b``."""
    if not b:
        raise ZeroDivisionError("division by zero twisted polynomial")
    tw = a.twist
    q = SkewLaurentPoly.zero(tw)
    if not a:
        return q, a
    bh, beta = b.leading()
    db = b.degree()
    lo = a.n_minus
    r = a
    beta_inv = beta.inverse()
    while r and r.n_plus >= lo + db:
        p, alpha = r.leading()
        term = SkewLaurentPoly._raw(tw, {p - bh: tw.apply(-bh, beta_inv * alpha)})
        q = q + term
        r = r - b * term
    return q, r


def random_element(rng, twist: Twist, span: int = 3, density: float = 0.7, coeff_terms: int = 2,
                   coeff_range: int = 3, denominators: bool = True) -> SkewLaurentPoly:
    """Random element for property tests; may be zero."""
    k = twist.k
    lo = rng.randint(-2, 2)
    coeffs = {}
    for m in range(lo, lo + span + 1):
        if rng.random() < density:
            coeffs[m] = random_field_element(rng, k, coeff_terms, coeff_range, denominators)
    return SkewLaurentPoly(twist, coeffs)


def random_field_element(rng, k: int, terms: int = 2, coeff_range: int = 3, denominators: bool = True):
    def poly(lo):
        return LaurentPoly(k, {
            tuple(rng.randint(lo, 2) for _ in range(k)): rng.randint(-coeff_range, coeff_range)
            for _ in range(rng.randint(1, terms))
        })

    num = poly(-1)
    if denominators and k and rng.random() < 0.3:
        den = poly(0)
        if den:
            return RationalFunction(k, num.terms, den.terms)
    return RationalFunction.from_laurent(num)


def from_terms(twist: Twist, terms: Iterable[Tuple[int, object]]) -> SkewLaurentPoly:
    out: Dict[int, object] = {}
    for m, c in terms:
        c = _as_field(twist.k, c)
        out[m] = out[m] + c if m in out else c
    return SkewLaurentPoly(twist, out)
