"""Exact phase-one simplex for small feasibility problems over Q."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import List, Optional, Sequence


def feasible_point(a: Sequence[Sequence[object]], b: Sequence[object]) -> Optional[List[Fraction]]:
    """Return some ``x >= 0`` with ``a x = b``, or ``None`` if there is none.

    Phase one of the tableau simplex method with one artificial variable per
    row and Bland's rule, so it cannot cycle.  Pivoting is integer and
    fraction-free: the stored tableau is ``d`` times the true one, where ``d``
    is the previous pivot, and every update divides exactly by ``d``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows: List[List[int]] = []
    for i in range(m):
        row = [Fraction(x) for x in a[i]] + [Fraction(b[i])]
        den = lcm(*(x.denominator for x in row))
        row = [int(x * den) for x in row]
        if row[-1] < 0:
            row = [-x for x in row]
        rhs = row.pop()
        # columns: n originals, m artificials, rhs
        rows.append(row + [int(j == i) for j in range(m)] + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    # objective: minimize the sum of artificials, in reduced form
    cost = [0] * (width + 1)
    for row in rows:
        for j in range(n):
            cost[j] -= row[j]
        cost[width] -= row[width]
    d = 1
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                if leave is None:
                    leave = i
                    continue
                lr = rows[leave]
                # compare row[rhs]/row[enter] with lr[rhs]/lr[enter]
                lhs, rhs = row[width] * lr[enter], lr[width] * row[enter]
                if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                    leave = i
        if leave is None:  # unbounded cannot happen in phase one
            break
        d = _pivot(rows, cost, leave, enter, d)
        basis[leave] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = Fraction(rows[i][width], rows[i][j])
    return x


def _pivot(rows, cost, r, c, d):
    pr = rows[r]
    p = pr[c]
    for i, row in enumerate(rows):
        if i != r:
            f = row[c]
            rows[i] = [(x * p - f * y) // d for x, y in zip(row, pr)]
    f = cost[c]
    cost[:] = [(x * p - f * y) // d for x, y in zip(cost, pr)]
    return p


def in_convex_hull(p: Sequence[int], points: Sequence[Sequence[int]]) -> bool:
    """Exact test whether ``p`` is a convex combination of ``points``."""
    if not points:
        return False
    d = len(p)
    a = [[q[k] for q in points] for k in range(d)] + [[1] * len(points)]
    return feasible_point(a, list(p) + [1]) is not None
