"""Exact commutative rings: Laurent polynomials, rational functions, group rings."""

from l2chi.ring.groupring import AbelianGroup, GroupRingElement, PolyZGroup
from l2chi.ring.laurent import LaurentPoly, pgcd
from l2chi.ring.ratfunc import RationalFunction

__all__ = [
    "AbelianGroup",
    "GroupRingElement",
    "LaurentPoly",
    "PolyZGroup",
    "RationalFunction",
    "pgcd",
]
