"""Euclidean diagonalization of square matrices over D_t[u^{+-1}].

Conventions: a matrix ``A`` acts on row vectors by right multiplication,
``r_A(x) = x A``.  Operations that preserve ``coker(r_A)`` up to isomorphism
are ``A -> E A F`` with ``E``, ``F`` invertible, so rows are combined with
*left* ring multiples (``row_i += q * row_j``) and columns with *right* ring
multiples (``col_j += col_i * q``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from l2chi.ring.ratfunc import RationalFunction, content_normalizer
from l2chi.skew import SkewLaurentPoly, Twist

SkewMatrix = List[List[SkewLaurentPoly]]


class NotInjectiveError(ArithmeticError):
    """Right multiplication by the matrix has a nontrivial kernel."""


class SizeGuardError(RuntimeError):
    """Coefficient growth exceeded the configured limit."""


@dataclass
class Op:
    """One invertible elementary operation.

    ``scale_row``: row_i <- factor * row_i;  ``scale_col``: col_i <- col_i * factor
    (factor a nonzero scalar of D, hence a unit);  ``add_row``: row_i -= factor * row_j;
    ``add_col``: col_i -= col_j * factor;  plus row/column swaps.
    """

    kind: str
    i: int
    j: int = -1
    factor: Optional[SkewLaurentPoly] = None

    def apply(self, m: SkewMatrix) -> None:
        k, i, j, f = self.kind, self.i, self.j, self.factor
        if k == "swap_rows":
            m[i], m[j] = m[j], m[i]
        elif k == "swap_cols":
            for row in m:
                row[i], row[j] = row[j], row[i]
        elif k == "scale_row":
            m[i] = [f * a for a in m[i]]
        elif k == "scale_col":
            for row in m:
                row[i] = row[i] * f
        elif k == "add_row":
            m[i] = [a - f * b for a, b in zip(m[i], m[j])]
        elif k == "add_col":
            for row in m:
                row[i] = row[i] - row[j] * f
        else:
            raise ValueError(k)


@dataclass
class DiagonalizationResult:
    diagonal: List[SkewLaurentPoly]
    injective: bool
    ops: List[Op] = field(default_factory=list)
    twist: Optional[Twist] = None

    def degrees(self) -> List[Optional[int]]:
        return [d.degree() if d else None for d in self.diagonal]

    @cached_property
    def det_class(self) -> Optional[SkewLaurentPoly]:
        """Representative of the Dieudonné class of the input matrix (``None`` if singular)."""
        if not self.injective or self.twist is None:
            return None
        det = SkewLaurentPoly.one(self.twist)
        for d in self.diagonal:
            det = det * d
        # undo the scalings and swaps so the class is that of the input matrix
        for op in self.ops:
            if op.kind in ("scale_row", "scale_col"):
                det = det * op.factor.coeffs[0].inverse()
            elif op.kind in ("swap_rows", "swap_cols"):
                det = -det
        return det


def matrix_size(m: Sequence[Sequence[SkewLaurentPoly]]) -> int:
    return sum(x.size() for row in m for x in row)


def _pick_pivot(a: SkewMatrix, t: int, strategy: str, again: bool = False):
    n = len(a)
    best = None
    if again and strategy == "first":
        # the old pivot must not win again; any remainder has smaller degree
        for i in range(t + 1, n):
            if a[i][t]:
                return i, t
        for j in range(t + 1, n):
            if a[t][j]:
                return t, j
    for i in range(t, n):
        for j in range(t, n):
            x = a[i][j]
            if x:
                if strategy == "first":
                    return i, j
                key = (x.degree(), i, j) if strategy == "min-degree" else (x.degree(), -i, -j)
                if best is None or key < best[0]:
                    best = (key, i, j)
    return None if best is None else best[1:]


class _Work:
    def __init__(self, m, twist, limit_bytes, fraction_free=True):
        self.a: SkewMatrix = [list(row) for row in m]
        self.fraction_free = fraction_free
        self.ops: List[Op] = []
        self.tw = twist
        self.limit_bits = None if limit_bytes is None else 8 * limit_bytes
        self.guard()

    def do(self, op: Op):
        op.apply(self.a)
        self.ops.append(op)

    def scalar(self, c: RationalFunction) -> SkewLaurentPoly:
        return SkewLaurentPoly._raw(self.tw, {0: c})

    def normalize_row(self, i: int):
        """Left-scale row ``i`` to coprime Laurent-polynomial coefficients."""
        coeffs = [c for x in self.a[i] for c in x.coeffs.values()]
        if not coeffs:
            return
        d = content_normalizer(coeffs)
        if d != 1:
            self.do(Op("scale_row", i, factor=self.scalar(d)))

    def reduce_row(self, i: int, t: int):
        """Lower ``deg a[i][t]`` below the pivot degree, fraction-free."""
        a = self.a
        p = a[t][t]
        bh, beta = p.leading()
        db = p.degree()
        lo = a[i][t].n_minus
        while a[i][t] and a[i][t].n_plus >= lo + db:
            x = a[i][t]
            top, alpha = x.leading()
            s = top - bh
            if self.fraction_free:
                # sigma^s(beta) x - alpha u^s p kills the top term
                self.do(Op("scale_row", i, factor=self.scalar(self.tw.apply(s, beta))))
                self.do(Op("add_row", i, t, SkewLaurentPoly._raw(self.tw, {s: alpha})))
                self.normalize_row(i)
            else:
                # x - (alpha / sigma^s(beta)) u^s p
                self.do(Op("add_row", i, t, SkewLaurentPoly._raw(self.tw, {s: alpha / self.tw.apply(s, beta)})))
            self.guard()

    def reduce_col(self, j: int, t: int):
        a = self.a
        p = a[t][t]
        bh, beta = p.leading()
        db = p.degree()
        lo = a[t][j].n_minus
        while a[t][j] and a[t][j].n_plus >= lo + db:
            x = a[t][j]
            top, alpha = x.leading()
            s = top - bh
            # x - p sigma^-bh(alpha / beta) u^s kills the top term; scaling the
            # column instead lets coefficients grow without bound under twists
            self.do(Op("add_col", j, t, SkewLaurentPoly._raw(self.tw, {s: self.tw.apply(-bh, alpha / beta)})))
            self.guard()

    def guard(self):
        if self.limit_bits is not None and matrix_size(self.a) > self.limit_bits:
            raise SizeGuardError(f"coefficient size exceeded {self.limit_bits // 8} bytes during diagonalization")


def _diagonal_form(m: Sequence[Sequence[SkewLaurentPoly]], strategy: str,
                   limit_bytes: Optional[int], tw: Optional[Twist]) -> DiagonalizationResult:
    n = len(m)
    w = _Work(m, tw, limit_bytes, fraction_free=False)
    a = w.a
    exhausted = False
    for t in range(n):
        again = False
        while True:
            piv = _pick_pivot(a, t, strategy, again)
            again = True
            if piv is None:
                exhausted = True
                break
            pi, pj = piv
            if pi != t:
                w.do(Op("swap_rows", t, pi))
            if pj != t:
                w.do(Op("swap_cols", t, pj))
            for i in range(t + 1, n):
                if a[i][t]:
                    w.reduce_row(i, t)
            for j in range(t + 1, n):
                if a[t][j]:
                    w.reduce_col(j, t)
            if not any(a[i][t] for i in range(t + 1, n)) and not any(a[t][j] for j in range(t + 1, n)):
                break
        if exhausted:
            break
    return _result(w, tw)


def _result(w: "_Work", tw) -> DiagonalizationResult:
    diagonal = [w.a[i][i] for i in range(len(w.a))]
    return DiagonalizationResult(diagonal, all(diagonal), w.ops, tw)


def _triangular_form(m, strategy: str, limit_bytes: Optional[int], tw) -> DiagonalizationResult:
    n = len(m)
    w = _Work(m, tw, limit_bytes)
    a = w.a
    for i in range(n):
        w.normalize_row(i)
    for t in range(n):
        again = False
        while True:
            rows = [i for i in range(t, n) if a[i][t]]
            if not rows:
                return _result(w, tw)
            if strategy == "first":
                p = rows[1] if again and len(rows) > 1 else rows[0]
            elif strategy == "min-degree":
                p = min(rows, key=lambda i: (a[i][t].degree(), a[i][t].size(), i))
            else:
                p = min(rows, key=lambda i: (a[i][t].degree(), a[i][t].size(), -i))
            if p != t:
                w.do(Op("swap_rows", t, p))
            rest = [i for i in range(t + 1, n) if a[i][t]]
            if not rest:
                break
            for i in rest:
                w.reduce_row(i, t)
            again = True
    return _result(w, tw)


def diagonalize(m: Sequence[Sequence[SkewLaurentPoly]], strategy: str = "min-degree",
                limit_bytes: Optional[int] = None, twist: Optional[Twist] = None,
                form: str = "triangular") -> DiagonalizationResult:
    """Reduce a square matrix by invertible elementary operations.

    ``form="diagonal"`` clears pivot rows and columns alternately until the
    matrix is diagonal.  ``form="triangular"`` (the default) uses row
    operations only and stops at an upper triangular matrix; its diagonal has
    the same degree sum and the same Dieudonné class as any diagonal form,
    and it avoids the coefficient growth of right-scaled columns.

    ``strategy`` picks pivots: ``"min-degree"`` (ties row-major),
    ``"min-degree-last"`` (ties reversed) or ``"first"``.  Each pass leaves a
    remainder of strictly smaller degree, so the Euclidean loop terminates.
    All steps are fraction-free: leading coefficients are cross-multiplied
    (nonzero scalars are units of the ring) and touched rows are rescaled to
    primitive Laurent-polynomial coefficients.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("diagonalize expects a square matrix")
    if strategy not in ("min-degree", "min-degree-last", "first"):
        raise ValueError(f"unknown pivot strategy {strategy!r}")
    tw = twist or (m[0][0].twist if n else None)
    if form == "triangular":
        return _triangular_form(m, strategy, limit_bytes, tw)
    if form == "diagonal":
        return _diagonal_form(m, strategy, limit_bytes, tw)
    raise ValueError(f"unknown form {form!r}")


def coker_dim(m: Sequence[Sequence[SkewLaurentPoly]], **kw) -> int:
    """D-dimension of the cokernel of right multiplication by ``m``."""
    res = diagonalize(m, **kw)
    if not res.injective:
        raise NotInjectiveError("matrix is not injective over the twisted Laurent ring")
    return sum(d.degree() for d in res.diagonal)


def dieudonne_det(m: Sequence[Sequence[SkewLaurentPoly]], **kw) -> Tuple[SkewLaurentPoly, int]:
    """Representative of the Dieudonné determinant class and its degree.

    The representative is the product of the Euclidean diagonal entries
    divided by the scalars used to rescale rows and columns, with one sign per
    swap.  In the commutative case it is the ordinary determinant; in general
    it is defined modulo commutators, which do not change the degree.
    """
    res = diagonalize(m, **kw)
    if not res.injective:
        raise NotInjectiveError("Dieudonné determinant of a non-invertible matrix")
    return res.det_class, res.det_class.degree()


@dataclass
class BoundReport:
    n: int
    k: int
    injective: bool
    dimension: Optional[int]

    @property
    def holds(self) -> bool:
        return not self.injective or self.dimension <= self.k


def shifted_identity_matrix(a: Sequence[Sequence[RationalFunction]], k: int, twist: Twist) -> SkewMatrix:
    """``A + u * I_k^n``: first ``k`` diagonal entries get ``u`` added."""
    n = len(a)
    if not 0 <= k <= n or any(len(r) != n for r in a):
        raise ValueError(f"need an n x n matrix and 0 <= k <= n (n={n}, k={k})")
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            coeffs = {0: a[i][j]}
            if i == j and i < k:
                coeffs[1] = RationalFunction.one(twist.k)
            row.append(SkewLaurentPoly(twist, coeffs))
        out.append(row)
    return out


def ik_bound_check(a: Sequence[Sequence[RationalFunction]], k: int, twist: Twist) -> BoundReport:
    """Check ``dim coker(r_{A + u I_k^n}) <= k`` whenever the map is injective."""
    n = len(a)
    res = diagonalize(shifted_identity_matrix(a, k, twist))
    if not res.injective:
        return BoundReport(n, k, False, None)
    dim = sum(d.degree() for d in res.diagonal)
    report = BoundReport(n, k, True, dim)
    if not report.holds:
        raise AssertionError(f"cokernel dimension {dim} exceeds k = {k} for n = {n}")
    return report
