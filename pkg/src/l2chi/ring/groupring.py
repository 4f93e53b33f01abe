"""Supported quotient groups and their rational group rings.

Two kinds of torsion-free elementary amenable quotients are supported:

* ``AbelianGroup(n)``: Z^n, elements are integer tuples;
* ``PolyZGroup(A)``: Z^k x|_A Z, elements are pairs ``(v, m)`` multiplied by
  ``(v, m)(v', m') = (v + A^m v', m + m')``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, Mapping, Sequence

from l2chi.intmat import MatrixPowers, det, matvec


class AbelianGroup:
    kind = "abelian"

    def __init__(self, n: int):
        self.n = n

    def identity(self):
        return (0,) * self.n

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def validate(self, g) -> tuple:
        g = tuple(int(x) for x in g)
        if len(g) != self.n:
            raise ValueError(f"element {g} is not in Z^{self.n}")
        return g

    def is_identity(self, g) -> bool:
        return not any(g)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.n == self.n

    def __hash__(self):
        return hash(("abelian", self.n))

    def __repr__(self):
        return f"AbelianGroup({self.n})"


class PolyZGroup:
    kind = "polyZ"

    def __init__(self, matrix: Sequence[Sequence[int]], power_cache: int = 64):
        self.matrix = tuple(tuple(int(x) for x in r) for r in matrix)
        self.k = len(self.matrix)
        if any(len(r) != self.k for r in self.matrix):
            raise ValueError("twist matrix must be square")
        if abs(det(self.matrix)) != 1:
            raise ValueError("twist matrix must be unimodular")
        self.powers = MatrixPowers(self.matrix, power_cache)

    def identity(self):
        return ((0,) * self.k, 0)

    def mul(self, g, h):
        (v, m), (w, n) = g, h
        aw = matvec(self.powers(m), w)
        return (tuple(a + b for a, b in zip(v, aw)), m + n)

    def inv(self, g):
        v, m = g
        w = matvec(self.powers(-m), v)
        return (tuple(-a for a in w), -m)

    def validate(self, g):
        v, m = g
        v = tuple(int(x) for x in v)
        if len(v) != self.k:
            raise ValueError(f"element {g} does not have a length-{self.k} vector part")
        return (v, int(m))

    def is_identity(self, g) -> bool:
        return not any(g[0]) and g[1] == 0

    def __eq__(self, other):
        return isinstance(other, PolyZGroup) and other.matrix == self.matrix

    def __hash__(self):
        return hash(("polyZ", self.matrix))

    def __repr__(self):
        return f"PolyZGroup({[list(r) for r in self.matrix]})"


def group_power(group, g, e: int):
    out = group.identity()
    base = g if e >= 0 else group.inv(g)
    for _ in range(abs(e)):
        out = group.mul(out, base)
    return out


class GroupRingElement:
    """Finite formal sum ``sum c_g g`` with rational coefficients."""

    __slots__ = ("group", "terms")

    def __init__(self, group, terms: Mapping[Hashable, object] | None = None):
        self.group = group
        clean: Dict[Hashable, Fraction] = {}
        for g, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[g] = clean.get(g, 0) + c
        self.terms = {g: c for g, c in clean.items() if c}

    @classmethod
    def _raw(cls, group, terms):
        obj = object.__new__(cls)
        obj.group = group
        obj.terms = terms
        return obj

    @classmethod
    def of(cls, group, g, c=1) -> "GroupRingElement":
        return cls(group, {g: c})

    @classmethod
    def one(cls, group) -> "GroupRingElement":
        return cls(group, {group.identity(): 1})

    @classmethod
    def zero(cls, group) -> "GroupRingElement":
        return cls._raw(group, {})

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        if other.group != self.group:
            raise ValueError("group ring elements over different groups")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for g, c in other.terms.items():
            s = out.get(g, 0) + c
            if s:
                out[g] = s
            else:
                out.pop(g, None)
        return GroupRingElement._raw(self.group, out)

    def __neg__(self):
        return GroupRingElement._raw(self.group, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return GroupRingElement(self.group, {g: c * other for g, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        out: Dict[Hashable, Fraction] = {}
        mul = self.group.mul
        for g, a in self.terms.items():
            for h, b in other.terms.items():
                k = mul(g, h)
                out[k] = out.get(k, 0) + a * b
        return GroupRingElement._raw(self.group, {g: c for g, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.terms == other.terms

    def __hash__(self):
        return hash((self.group, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def augmentation(self) -> Fraction:
        return sum(self.terms.values(), Fraction(0))

    def __repr__(self):
        items = ", ".join(f"{c}*{g}" for g, c in sorted(self.terms.items(), key=lambda x: repr(x[0])))
        return f"GroupRingElement({self.group!r}: {items})"
