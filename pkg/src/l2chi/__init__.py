"""Twisted L2-Euler characteristics of 3-manifold presentations and their polytopes."""

from __future__ import annotations

__version__ = "0.1.0"

from l2chi.euler import (  # noqa: E402
    EulerResult,
    NotAcyclicError,
    PhiSpec,
    QuotientSpec,
    chi2,
    chi2_boundary,
    chi2_closed,
    delta_invariant,
)
from l2chi.presentation import Presentation  # noqa: E402

__all__ = [
    "EulerResult",
    "NotAcyclicError",
    "PhiSpec",
    "Presentation",
    "QuotientSpec",
    "chi2",
    "chi2_boundary",
    "chi2_closed",
    "delta_invariant",
]
