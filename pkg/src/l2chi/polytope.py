"""Integral polytopes, Minkowski sums and the polytope Grothendieck group.

A polytope is stored as its canonical vertex set: the extreme points of the
convex hull, deduplicated and sorted lexicographically.  Canonical form turns
semantic equality into structural equality.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce
from numbers import Integral
from typing import Iterable, Sequence, Tuple

from l2chi.simplex import in_convex_hull

MAX_DIMENSION = 6

Point = Tuple[int, ...]


def _lattice_point(p) -> Point:
    out = []
    for x in p:
        if isinstance(x, Integral):
            out.append(int(x))
        elif isinstance(x, Fraction) and x.denominator == 1:
            out.append(int(x))
        else:
            raise ValueError(f"point {tuple(p)} is not a lattice point")
    return tuple(out)


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts):
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return sorted(set(lower[:-1] + upper[:-1]))


def _extreme_points(pts, dim):
    if len(pts) <= 2:
        return pts
    # a unique maximizer of a linear functional is certainly extreme
    rng = random.Random(len(pts) * 7919 + dim)
    directions = [[int(i == j) * s for j in range(dim)] for i in range(dim) for s in (1, -1)]
    directions += [[rng.randint(-97, 97) for _ in range(dim)] for _ in range(24 * dim)]
    sure = set()
    for d in directions:
        vals = [sum(a * b for a, b in zip(p, d)) for p in pts]
        top = max(vals)
        if vals.count(top) == 1:
            sure.add(pts[vals.index(top)])
    sure_list = sorted(sure)
    keep = list(pts)
    for p in pts:
        if p in sure:
            continue
        # most interior points already lie in the hull of the certain vertices
        if in_convex_hull(p, sure_list) or in_convex_hull(p, [q for q in keep if q != p]):
            keep.remove(p)
    return sorted(keep)


class IntegralPolytope:
    """Lattice polytope given by its extreme points (ambient dimension <= 6)."""

    __slots__ = ("dim", "vertices")

    def __init__(self, points: Iterable[Sequence[int]], dim: int | None = None):
        pts = sorted({_lattice_point(p) for p in points})
        if not pts:
            raise ValueError("a polytope needs at least one point")
        dims = {len(p) for p in pts}
        if len(dims) != 1 or (dim is not None and dims != {dim}):
            raise ValueError("points of different dimensions")
        self.dim = dims.pop()
        if self.dim > MAX_DIMENSION:
            raise ValueError(f"ambient dimension {self.dim} exceeds the cap of {MAX_DIMENSION}")
        if self.dim == 0:
            self.vertices = tuple(pts)
        elif self.dim == 1:
            self.vertices = tuple(sorted({pts[0], pts[-1]}))
        elif self.dim == 2:
            self.vertices = tuple(_hull_2d(pts))
        else:
            self.vertices = tuple(_extreme_points(pts, self.dim))

    @classmethod
    def point(cls, p: Sequence[int]) -> "IntegralPolytope":
        return cls([p])

    @classmethod
    def zero(cls, dim: int) -> "IntegralPolytope":
        return cls([(0,) * dim])

    def __add__(self, other: "IntegralPolytope") -> "IntegralPolytope":
        return minkowski_sum(self, other)

    def __neg__(self) -> "IntegralPolytope":
        return IntegralPolytope([tuple(-x for x in v) for v in self.vertices])

    def translate(self, v: Sequence[int]) -> "IntegralPolytope":
        return IntegralPolytope([tuple(a + b for a, b in zip(p, v)) for p in self.vertices])

    def is_point(self) -> bool:
        return len(self.vertices) == 1

    def __eq__(self, other):
        if not isinstance(other, IntegralPolytope):
            return NotImplemented
        return self.dim == other.dim and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.dim, self.vertices))

    def __repr__(self):
        return f"IntegralPolytope({[list(v) for v in self.vertices]})"


def canonicalize(points: Iterable[Sequence[int]]) -> IntegralPolytope:
    return IntegralPolytope(points)


def minkowski_sum(p: IntegralPolytope, q: IntegralPolytope) -> IntegralPolytope:
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    return IntegralPolytope(tuple(a + b for a, b in zip(x, y)) for x in p.vertices for y in q.vertices)


def _check_covector(dim: int, phi: Sequence[int]):
    if len(phi) != dim:
        raise ValueError(f"covector of length {len(phi)} for a polytope of dimension {dim}")


def seminorm_eval(p: IntegralPolytope, phi: Sequence[int]) -> Fraction:
    """Half the width of ``p`` in direction ``phi``."""
    _check_covector(p.dim, phi)
    vals = [sum(a * b for a, b in zip(v, phi)) for v in p.vertices]
    return Fraction(max(vals) - min(vals), 2)


class PolytopeDifference:
    """Formal difference ``[plus] - [minus]`` in the polytope group."""

    __slots__ = ("plus", "minus")

    def __init__(self, plus: IntegralPolytope, minus: IntegralPolytope | None = None):
        if minus is None:
            minus = IntegralPolytope.zero(plus.dim)
        if plus.dim != minus.dim:
            raise ValueError("difference of polytopes in different dimensions")
        self.plus = plus
        self.minus = minus

    @property
    def dim(self) -> int:
        return self.plus.dim

    @classmethod
    def zero(cls, dim: int) -> "PolytopeDifference":
        z = IntegralPolytope.zero(dim)
        return cls(z, z)

    def __add__(self, other: "PolytopeDifference") -> "PolytopeDifference":
        return PolytopeDifference(self.plus + other.plus, self.minus + other.minus)

    def __neg__(self) -> "PolytopeDifference":
        return PolytopeDifference(self.minus, self.plus)

    def __sub__(self, other: "PolytopeDifference") -> "PolytopeDifference":
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, PolytopeDifference):
            return NotImplemented
        return difference_equal(self, other)

    def __hash__(self):  # equality is not structural, so only the dimension is hashed
        return hash(self.dim)

    def __repr__(self):
        return f"PolytopeDifference({self.plus!r} - {self.minus!r})"


def difference_equal(a: PolytopeDifference, b: PolytopeDifference) -> bool:
    """``[P0] - [Q0] == [P1] - [Q1]`` iff ``P0 + Q1 == P1 + Q0``."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return a.plus + b.minus == b.plus + a.minus


def newton_polytope(f) -> IntegralPolytope:
    """Convex hull of the exponent support of a nonzero Laurent polynomial."""
    if not f.terms:
        raise ValueError("the zero polynomial has no Newton polytope")
    return IntegralPolytope(f.terms.keys())


def polytope_of_unit(z) -> PolytopeDifference:
    """``[P(f)] - [P(g)]`` for ``z = f / g``.

    ``z`` is a :class:`~l2chi.ring.ratfunc.RationalFunction`, a Laurent
    polynomial, or a ``(numerator, denominator)`` pair of Laurent polynomials.
    """
    if isinstance(z, tuple):
        f, g = z
    elif hasattr(z, "numerator") and callable(z.numerator):
        f, g = z.numerator(), z.denominator()
    else:
        f, g = z, None
    if not f.terms or (g is not None and not g.terms):
        raise ValueError("polytope of zero is undefined")
    plus = newton_polytope(f)
    minus = newton_polytope(g) if g is not None else IntegralPolytope.zero(plus.dim)
    return PolytopeDifference(plus, minus)


def d_eval(z: PolytopeDifference, phi: Sequence[int]) -> Fraction:
    return seminorm_eval(z.plus, phi) - seminorm_eval(z.minus, phi)


def sum_all(polys: Iterable[IntegralPolytope], dim: int) -> IntegralPolytope:
    return reduce(minkowski_sum, polys, IntegralPolytope.zero(dim))
