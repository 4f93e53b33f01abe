"""Multivariate Laurent polynomials over Q and exact polynomial gcd.

Polynomials are stored sparsely as ``{exponent tuple: Fraction}``.  The module
level helpers (``padd``, ``pmul``, ``pgcd`` ...) work on such raw dicts and are
shared by :mod:`l2chi.ring.ratfunc`; :class:`LaurentPoly` is the immutable
public wrapper.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping, Tuple

try:  # fast exact multivariate gcd; the pure-Python PRS below is the fallback
    import flint
except ImportError:  # pragma: no cover - exercised only without python-flint
    flint = None

Exp = Tuple[int, ...]
Poly = Dict[Exp, Fraction]

ONE = Fraction(1)


# ---------------------------------------------------------------------------
# raw dict arithmetic


def padd(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction]) -> Poly:
    out = dict(f)
    for e, c in g.items():
        s = out.get(e)
        if s is None:
            out[e] = c
        else:
            s += c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def psub(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction]) -> Poly:
    out = dict(f)
    for e, c in g.items():
        s = out.get(e)
        if s is None:
            out[e] = -c
        else:
            s -= c
            if s:
                out[e] = s
            else:
                del out[e]
    return out


def pneg(f: Mapping[Exp, Fraction]) -> Poly:
    return {e: -c for e, c in f.items()}


def pscale(f: Mapping[Exp, Fraction], c: Fraction) -> Poly:
    if not c:
        return {}
    return {e: c * a for e, a in f.items()}


def pmul(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction]) -> Poly:
    if flint is not None and len(f) * len(g) > _FLINT_MIN_WORK:
        n = len(next(iter(f)))
        if n:
            lf, lg = min_exponents(f, n), min_exponents(g, n)
            h = _to_flint(f, n, lf) * _to_flint(g, n, lg)
            return _from_flint(h, tuple(a + b for a, b in zip(lf, lg)))
    if len(f) > len(g):
        f, g = g, f
    out: Poly = {}
    get = out.get
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            out[e] = get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def pshift(f: Mapping[Exp, Fraction], v: Exp) -> Poly:
    """Multiply by the monomial ``t^v``."""
    return {tuple(a + b for a, b in zip(e, v)): c for e, c in f.items()}


def min_exponents(f: Mapping[Exp, Fraction], n: int) -> Exp:
    if not f:
        return (0,) * n
    it = iter(f)
    lo = list(next(it))
    for e in it:
        for i, a in enumerate(e):
            if a < lo[i]:
                lo[i] = a
    return tuple(lo)


def grlex_key(e: Exp) -> tuple:
    return (sum(e), e)


def leading_coefficient(f: Mapping[Exp, Fraction]) -> Fraction:
    """Coefficient of the graded-lex largest monomial."""
    return f[max(f, key=grlex_key)]


def make_monic(f: Mapping[Exp, Fraction]) -> Poly:
    lc = leading_coefficient(f)
    if lc == 1:
        return dict(f)
    inv = 1 / lc
    return {e: c * inv for e, c in f.items()}


def is_constant(f: Mapping[Exp, Fraction]) -> bool:
    return len(f) == 1 and not any(next(iter(f)))


# ---------------------------------------------------------------------------
# exact division


def pdivexact(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction]) -> Poly:
    """Return ``f / g`` for polynomials (nonnegative exponents).

    Raises ``ArithmeticError`` if ``g`` does not divide ``f``.
    """
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(g) == 1:
        (eg, cg), = g.items()
        inv = 1 / cg
        out = {}
        for e, c in f.items():
            q = tuple(a - b for a, b in zip(e, eg))
            if min(q, default=0) < 0:
                raise ArithmeticError("inexact monomial division")
            out[q] = c * inv
        return out
    if flint is not None and len(f) * len(g) > _FLINT_MIN_WORK:
        n = len(next(iter(f)))
        zero = (0,) * n
        try:
            return _from_flint(_to_flint(f, n, zero) / _to_flint(g, n, zero), zero)
        except Exception as exc:  # flint raises its own DomainError
            if type(exc).__name__ != "DomainError":
                raise
            raise ArithmeticError("inexact polynomial division") from None
    lg = max(g)
    lcg_inv = 1 / g[lg]
    rest = [(e, c) for e, c in g.items() if e != lg]
    r = dict(f)
    q: Poly = {}
    while r:
        lr = max(r)
        d = tuple(a - b for a, b in zip(lr, lg))
        if min(d, default=0) < 0:
            raise ArithmeticError("inexact polynomial division")
        c = r.pop(lr) * lcg_inv
        q[d] = c
        for e, a in rest:
            k = tuple(x + y for x, y in zip(e, d))
            s = r.get(k, 0) - c * a
            if s:
                r[k] = s
            else:
                r.pop(k, None)
    return q


# ---------------------------------------------------------------------------
# gcd


def _univariate_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd of two nonzero one-variable polynomials (primitive PRS over Z)."""
    a = _int_primitive(_to_dense(f))
    b = _int_primitive(_to_dense(g))
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _int_prem(a, b)
        if not r:
            break
        a, b = b, _int_primitive(r)
    if len(b) == 1:
        return {(0,): ONE}
    inv = Fraction(1, b[-1])
    return {(i,): c * inv for i, c in enumerate(b) if c}


def _to_dense(f: Poly) -> list:
    d = max(e[0] for e in f)
    out = [Fraction(0)] * (d + 1)
    for e, c in f.items():
        out[e[0]] = c
    return out


def _int_primitive(a: list) -> list:
    """Scale a dense rational coefficient list to coprime integers."""
    den = 1
    for c in a:
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = gcd(g, c)
        if g == 1:
            break
    if ints and ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def _int_prem(a: list, b: list) -> list:
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i in range(db + 1):
            r[shift + i] -= lr * b[i]
        while r and not r[-1]:
            r.pop()
        if r:
            r = _int_primitive(r)
    return r


def _split_last(f: Poly) -> Dict[int, Poly]:
    """View ``f`` as a polynomial in its last variable."""
    out: Dict[int, Poly] = {}
    for e, c in f.items():
        out.setdefault(e[-1], {})[e[:-1]] = c
    return out


def _join_last(u: Mapping[int, Poly]) -> Poly:
    return {e + (d,): c for d, cf in u.items() for e, c in cf.items()}


def _content(u: Mapping[int, Poly]) -> Poly:
    it = iter(u.values())
    c = next(it)
    for cf in it:
        if is_constant(c):
            break
        c = pgcd(c, cf)
    return c


def _udeg(u: Mapping[int, Poly]) -> int:
    return max(u)


def _uprem(a: Dict[int, Poly], b: Dict[int, Poly]) -> Dict[int, Poly]:
    """Pseudo-remainder of ``a`` by ``b`` over the coefficient ring."""
    db = _udeg(b)
    lcb = b[db]
    r = dict(a)
    steps = _udeg(a) - db + 1
    while r and _udeg(r) >= db:
        dr = _udeg(r)
        lcr = r[dr]
        shift = dr - db
        new: Dict[int, Poly] = {}
        for d, c in r.items():
            new[d] = pmul(lcb, c)
        for d, c in b.items():
            k = d + shift
            v = psub(new.get(k, {}), pmul(lcr, c))
            new[k] = v
        r = {d: c for d, c in new.items() if c}
        steps -= 1
    if steps > 0 and r:
        m = _ppow(lcb, steps)
        r = {d: pmul(m, c) for d, c in r.items()}
    return r


def _ppow(f: Poly, k: int) -> Poly:
    out: Poly = {tuple(0 for _ in next(iter(f))): ONE}
    for _ in range(k):
        out = pmul(out, f)
    return out


def _subresultant_gcd(a: Dict[int, Poly], b: Dict[int, Poly], nv: int) -> Dict[int, Poly]:
    """Primitive gcd of primitive ``a``, ``b`` via the subresultant PRS."""
    one: Poly = {(0,) * nv: ONE}
    if _udeg(a) < _udeg(b):
        a, b = b, a
    g = one
    h = one
    while True:
        delta = _udeg(a) - _udeg(b)
        r = _uprem(a, b)
        if not r:
            break
        if _udeg(r) == 0:
            return {0: one}
        divisor = pmul(g, _ppow(h, delta))
        a, b = b, {d: pdivexact(c, divisor) for d, c in r.items()}
        g = a[_udeg(a)]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = pdivexact(_ppow(g, delta), _ppow(h, delta - 1))
    cont = _content(b)
    return {d: pdivexact(c, cont) for d, c in b.items()}


_CTX: Dict[int, object] = {}
_FLINT_MIN_WORK = 48


def _ctx(n: int):
    ctx = _CTX.get(n)
    if ctx is None:
        ctx = _CTX[n] = flint.fmpq_mpoly_ctx.get(tuple(f"x{i}" for i in range(n)), "lex")
    return ctx


def _to_flint(f: Mapping[Exp, Fraction], n: int, lo: Exp):
    terms = {}
    for e, c in f.items():
        c = Fraction(c)
        terms[tuple(a - b for a, b in zip(e, lo))] = flint.fmpq(c.numerator, c.denominator)
    return _ctx(n).from_dict(terms)


def _from_flint(h, lo: Exp) -> Poly:
    return {tuple(int(a) + b for a, b in zip(e, lo)): Fraction(int(c.p), int(c.q)) for e, c in h.to_dict().items()}


def _flint_gcd(f, g, n: int) -> Poly:
    zero = (0,) * n
    return make_monic(_from_flint(_to_flint(f, n, zero).gcd(_to_flint(g, n, zero)), zero))


def pgcd(f: Mapping[Exp, Fraction], g: Mapping[Exp, Fraction]) -> Poly:
    """Monic (graded-lex) gcd of two polynomials with nonnegative exponents."""
    if not f and not g:
        raise ValueError("gcd of two zero polynomials")
    if not f:
        return make_monic(g)
    if not g:
        return make_monic(f)
    n = len(next(iter(f)))
    if n == 0:
        return {(): ONE}
    if len(f) == 1 or len(g) == 1:
        mono, other = (f, g) if len(f) == 1 else (g, f)
        e = next(iter(mono))
        return {tuple(min(x, y) for x, y in zip(e, min_exponents(other, n))): ONE}
    if flint is not None:
        return _flint_gcd(f, g, n)
    if n == 1:
        return _univariate_gcd(dict(f), dict(g))
    # pull out the common monomial factor first; keeps degrees small
    mf, mg = min_exponents(f, n), min_exponents(g, n)
    mono = tuple(min(x, y) for x, y in zip(mf, mg))
    f = pshift(f, tuple(-x for x in mf))
    g = pshift(g, tuple(-x for x in mg))
    uf, ug = _split_last(f), _split_last(g)
    cf, cg = _content(uf), _content(ug)
    c = pgcd(cf, cg)
    pf = {d: pdivexact(x, cf) for d, x in uf.items()}
    pg = {d: pdivexact(x, cg) for d, x in ug.items()}
    prim = _subresultant_gcd(pf, pg, n - 1)
    out = pmul(_join_last({d: pmul(c, x) for d, x in prim.items()}), {mono: ONE})
    return make_monic(out)


# ---------------------------------------------------------------------------
# public wrapper


class LaurentPoly:
    """Laurent polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exp, object] | None = None):
        self.nvars = nvars
        clean: Poly = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have length {nvars}")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        self.terms: Poly = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: Poly) -> "LaurentPoly":
        obj = object.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, nvars: int, c) -> "LaurentPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exps: Iterable[int], c=1) -> "LaurentPoly":
        e = tuple(exps)
        return cls(len(e), {e: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "LaurentPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def _check(self, other: "LaurentPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self.nvars, padd(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, pneg(self.terms))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self.nvars, psub(self.terms, other.terms))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPoly._raw(self.nvars, pmul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.nvars, {tuple(x * k for x in e): c ** k})
        out = LaurentPoly.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(self.nvars, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list:
        return sorted(self.terms)

    def min_exponents(self) -> Exp:
        return min_exponents(self.terms, self.nvars)

    def shifted_polynomial(self) -> Tuple[Poly, Exp]:
        """Return ``(p, v)`` with ``self = t^v * p`` and ``p`` a polynomial."""
        v = self.min_exponents()
        return pshift(self.terms, tuple(-x for x in v)), v

    def substitute_monomials(self, matrix) -> "LaurentPoly":
        """Apply ``t^e -> t^(M e)`` for an integer matrix ``M``."""
        out: Poly = {}
        for e, c in self.terms.items():
            k = tuple(sum(row[j] * e[j] for j in range(len(e))) for row in matrix)
            out[k] = out.get(k, 0) + c
        return LaurentPoly._raw(len(matrix), {e: c for e, c in out.items() if c})

    def newton_polytope(self):
        """Convex hull of the exponent support, as an :class:`IntegralPolytope`."""
        from l2chi.polytope import newton_polytope

        return newton_polytope(self)

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {format_poly(self.terms)!r})"

    def __str__(self):
        return format_poly(self.terms)


def _var_name(i: int, n: int) -> str:
    return "t" if n == 1 else f"t{i + 1}"


def format_poly(terms: Mapping[Exp, Fraction], names=None) -> str:
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, key=grlex_key, reverse=True):
        c = terms[e]
        mono = []
        for i, a in enumerate(e):
            if a:
                name = names[i] if names else _var_name(i, len(e))
                mono.append(name if a == 1 else f"{name}^{a}")
        m = "*".join(mono)
        if not m:
            s = str(c)
        elif c == 1:
            s = m
        elif c == -1:
            s = "-" + m
        else:
            s = f"{c}*{m}"
        parts.append(s)
    out = " + ".join(parts)
    return out.replace("+ -", "- ")
