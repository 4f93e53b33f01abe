"""Independent checks for the Euclidean machinery.

The window oracle computes ``dim coker(r_A)`` by plain linear algebra over
the coefficient field, without any Euclidean reduction: the cokernel of
``y -> yA`` on D_t[u^{+-1}]^n is finite dimensional, so it can be read off a
large enough window of u-exponents.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from l2chi.euler import QuotientError, QuotientSpec, Splitting, _auxiliary_splitting, deleted_fox_matrix
from l2chi.intmat import image_lattice_basis
from l2chi.polytope import IntegralPolytope, PolytopeDifference, polytope_of_unit
from l2chi.reduction import diagonalize
from l2chi.ring.laurent import _to_flint, flint, is_constant, pdivexact, pgcd, pmul
from l2chi.ring.ratfunc import RationalFunction
from l2chi.skew import SkewLaurentPoly


def field_rank(rows: Sequence[Sequence[RationalFunction]]) -> int:
    """Rank of a matrix over Q(t_1..t_k)."""
    rows = [list(r) for r in rows if any(r)]
    if not rows:
        return 0
    if flint is not None and rows[0][0].nvars > 0:
        return _bareiss_rank(rows)
    return _gauss_rank(rows)


def _gauss_rank(work) -> int:
    rank = 0
    if not work:
        return 0
    for c in range(len(work[0])):
        cands = [i for i in range(rank, len(work)) if work[i][c]]
        if not cands:
            continue
        p = min(cands, key=lambda i: sum(x.size() for x in work[i] if x))
        work[rank], work[p] = work[p], work[rank]
        piv = work[rank]
        inv = piv[c].inverse()
        for i in range(rank + 1, len(work)):
            f = work[i][c]
            if f:
                f = f * inv
                work[i] = [x - f * y if y else x for x, y in zip(work[i], piv)]
        rank += 1
    return rank


def _bareiss_rank(rows) -> int:
    """Fraction-free elimination over Q[t].

    Each row is first multiplied by a common denominator and a monomial, a
    nonzero scalar that leaves the rank unchanged, so all entries are
    ordinary polynomials.  A row is then only ever replaced by a nonzero
    multiple of itself plus a multiple of the pivot row, and divided by the
    gcd of its entries to keep coefficients small.
    """
    n = rows[0][0].nvars
    work = []
    for r in rows:
        den = {(0,) * n: Fraction(1)}
        for x in r:
            if x and not is_constant(x.den):
                den = pmul(den, pdivexact(x.den, pgcd(den, x.den)))
        scaled = [pmul(x.num, pdivexact(den, x.den)) if x else {} for x in r]
        lo = tuple(min(e[i] for f in scaled for e in f) for i in range(n))
        work.append([_to_flint(f, n, lo) for f in scaled])
    rank = 0
    for c in range(len(work[0])):
        cands = [i for i in range(rank, len(work)) if work[i][c] != 0]
        if not cands:
            continue
        p = min(cands, key=lambda i: sum(len(x) for x in work[i]))
        work[rank], work[p] = work[p], work[rank]
        piv = work[rank]
        pv = piv[c]
        for i in range(rank + 1, len(work)):
            row = work[i]
            if row[c] == 0:
                continue
            g = pv.gcd(row[c])
            a, b = pv / g, row[c] / g
            new = [a * x - b * y for x, y in zip(row, piv)]
            content = 0
            for x in new:
                if x != 0:
                    content = x if content == 0 else content.gcd(x)
                    if content.is_one():
                        break
            if content != 0 and not content.is_one():
                new = [x / content for x in new]
            work[i] = new
        rank += 1
    return rank


def _window_coker(a: Sequence[Sequence[SkewLaurentPoly]], tw, lo: int, hi: int, pad: int) -> int:
    n, m = len(a), len(a[0])
    k = tw.k
    zero = RationalFunction.zero(k)
    ylo, yhi = lo - pad, hi + pad
    unknowns = [(i, e) for i in range(n) for e in range(ylo, yhi + 1)]
    # equation (j, c): coefficient of u^c in column j of yA, for c outside [lo, hi]
    elo = ylo + min(x.n_minus for r in a for x in r if x)
    ehi = yhi + max(x.n_plus for r in a for x in r if x)
    eqs = [(j, c) for j in range(m) for c in range(elo, ehi + 1) if not lo <= c <= hi]
    col = {e: idx for idx, e in enumerate(eqs)}
    rows = []
    for i, e in unknowns:
        row = [zero] * len(eqs)
        for j in range(m):
            for b, coef in a[i][j].coeffs.items():
                idx = col.get((j, e + b))
                if idx is not None:
                    row[idx] = row[idx] + tw.apply(e, coef)
        rows.append(row)
    nullity = len(unknowns) - field_rank(rows)
    return m * (hi - lo + 1) - nullity


def window_coker_dim(a: Sequence[Sequence[SkewLaurentPoly]], size: Optional[int] = None) -> int:
    """``dim coker(r_A)`` for an injective square matrix ``A``, via truncation.

    A class in the cokernel has a representative supported in a window
    ``W``, and ``yA`` supported in ``W`` forces ``y`` into a slightly larger
    window ``W'``; then ``dim coker = n |W| - dim {y in W' : yA in W}``.
    Columns are first shifted by powers of u (right multiplication by a unit,
    which leaves the cokernel unchanged) so that exponents, and with them the
    twisted coefficients, stay small.  The window is grown until two
    consecutive sizes agree.
    """
    if not a:
        return 0
    n = len(a)
    tw = next(x.twist for r in a for x in r if x)
    shifted = [list(r) for r in a]
    for j in range(len(a[0])):
        lows = [r[j].n_minus for r in a if r[j]]
        if lows:
            for r in shifted:
                if r[j]:
                    r[j] = r[j].shift(-min(lows))
    span = max(x.n_plus for r in shifted for x in r if x)
    base = size if size is not None else max(1, n * span)
    prev = None
    for grow in range(4):
        step = grow * max(1, span)
        cur = _window_coker(shifted, tw, 0, base + step, (n - 1) * span + step)
        if cur == prev:
            return cur
        prev = cur
    raise ArithmeticError("window oracle did not stabilize")


def lift_commutative(z: SkewLaurentPoly) -> RationalFunction:
    """An untwisted element of Q(t_1..t_k)[u^{+-1}] as a function of k+1 variables."""
    if z.twist.matrix != tuple(tuple(int(i == j) for j in range(z.twist.k)) for i in range(z.twist.k)):
        raise ValueError("only untwisted elements lift to a commutative field")
    k = z.twist.k
    out = RationalFunction.zero(k + 1)
    for m, c in z.coeffs.items():
        num = RationalFunction(k + 1, {e + (m,): v for e, v in c.num.items()})
        den = RationalFunction(k + 1, {e + (0,): v for e, v in c.den.items()})
        out = out + num / den
    return out


def fox_polytope(p, q: QuotientSpec, column: int, row: Optional[int] = None) -> PolytopeDifference:
    """Polytope class of the Dieudonne determinant of a deleted Fox matrix.

    Abelian quotients only.  The matrix is rewritten over the image lattice,
    its determinant lifted to a rational function there, and the polytope
    difference is mapped back to the ambient coordinates of Z^n.
    """
    if q.kind != "abelian":
        raise QuotientError("polytopes are computed for abelian quotients only")
    split: Splitting = _auxiliary_splitting(q)
    mat = deleted_fox_matrix(p, q, column, row, split.group, split.coords)
    if not mat:
        return PolytopeDifference.zero(q.n)
    rows = [[split.rewrite(x) for x in r] for r in mat]
    res = diagonalize(rows, twist=split.twist)
    if not res.injective:
        raise ArithmeticError("the deleted Fox matrix is not injective")
    diff = polytope_of_unit(lift_commutative(res.det_class))
    basis, _ = image_lattice_basis(q.images, q.n)
    return PolytopeDifference(_to_ambient(diff.plus, basis, q.n), _to_ambient(diff.minus, basis, q.n))


def _to_ambient(poly: IntegralPolytope, basis, n: int) -> IntegralPolytope:
    return IntegralPolytope(
        [tuple(sum(c * b[i] for c, b in zip(v, basis)) for i in range(n)) for v in poly.vertices], n
    )
