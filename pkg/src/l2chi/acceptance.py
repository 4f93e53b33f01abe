"""The fourteen acceptance criteria, runnable from tests and from ``l2chi selftest``.

Every criterion is a function returning a :class:`Criterion`; randomized
criteria use fixed seeds so a run is reproducible.  A criterion with a time
budget fails when it is exceeded.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import gcd
from pathlib import Path
from typing import Callable, List, Optional

from l2chi.euler import (
    Orbifold,
    QuotientSpec,
    chi2,
    chi2_boundary,
    fox_determinant,
    infinite_cyclic_chi2,
    seifert_chi2,
    split_along_phi,
    thurston_from_genus,
    valid_columns,
    valid_rows,
)
from l2chi.fileformat import ManifoldInput, expand_paths, load_input
from l2chi.oracles import window_coker_dim
from l2chi.polytope import (
    IntegralPolytope,
    PolytopeDifference,
    d_eval,
    difference_equal,
    newton_polytope,
    polytope_of_unit,
)
from l2chi.presentation import FreeWord, Presentation, fox_derivative, reduce_word, word_image
from l2chi.reduction import coker_dim, diagonalize, dieudonne_det, ik_bound_check
from l2chi.ring.groupring import AbelianGroup, GroupRingElement, PolyZGroup
from l2chi.ring.laurent import LaurentPoly
from l2chi.skew import Twist, random_element, random_field_element


@dataclass
class Criterion:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float
    budget: Optional[float] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:g}s)" if self.budget else ""
        return f"[{status}] {self.number:2d}. {self.title}: {self.detail} [{self.seconds:.2f}s{budget}]"


def corpus_dir() -> Path:
    return Path(str(resources.files("l2chi") / "corpus"))


def load_corpus() -> List[ManifoldInput]:
    return [load_input(p) for p in expand_paths([corpus_dir()])]


def _corpus_entry(name: str) -> ManifoldInput:
    return load_input(corpus_dir() / f"{name}.yaml")


def _timed(number: int, title: str, budget: Optional[float], body: Callable[[], tuple]) -> Criterion:
    start = time.perf_counter()
    try:
        ok, detail = body()
    except Exception as exc:  # a crash is a failure, reported in-band
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed >= budget:
        ok, detail = False, f"{detail}; over budget"
    return Criterion(number, title, ok, detail, elapsed, budget)


def _run(m: ManifoldInput, phi=None, **kw):
    return chi2(m.presentation, m.quotient, phi if phi is not None else m.phi, m.dual, **kw)


# ---------------------------------------------------------------------------
# closed-form families


def c01_trefoil() -> Criterion:
    def body():
        m = _corpus_entry("trefoil")
        r = _run(m)
        ok = r.chi2 == -1 and r.thurston_lower_bound == 1 == thurston_from_genus(1)
        return ok, f"chi2 = {r.chi2}, bound = {r.thurston_lower_bound}, max(2g-1,0) = {thurston_from_genus(1)}"
    return _timed(1, "trefoil exterior", 1.0, body)


def c02_figure_eight() -> Criterion:
    def body():
        m = _corpus_entry("figure_eight")
        r = _run(m)
        delta = fox_determinant(m.presentation, m.quotient)
        want = LaurentPoly(1, {(0,): 1, (1,): -3, (2,): 1})
        return r.chi2 == -1 and delta == want, f"chi2 = {r.chi2}, Alexander polynomial {delta}"
    return _timed(2, "figure-eight knot", 1.0, body)


def torus_knot(p: int, q: int) -> tuple:
    pres = Presentation.parse(["a", "b"], [f"a^{p} b^-{q}"], f"T({p},{q})")
    return pres, QuotientSpec.abelian([[q], [p]])


def c03_torus_knots() -> Criterion:
    def body():
        bad, count = [], 0
        for p in range(2, 8):
            for q in range(p + 1, 8):
                if gcd(p, q) != 1:
                    continue
                pres, quot = torus_knot(p, q)
                r = chi2_boundary(pres, quot, [1])
                count += 1
                if -r.chi2 != p * q - p - q:
                    bad.append(f"T({p},{q}): {-r.chi2} != {p * q - p - q}")
        return not bad, f"{count} knots, " + ("all match pq-p-q" if not bad else "; ".join(bad))
    return _timed(3, "torus knots T(p,q)", 5.0, body)


# ---------------------------------------------------------------------------
# corpus-wide invariants


def c04_scaling() -> Criterion:
    def body():
        bad, checks = [], 0
        for m in load_corpus():
            base = _run(m).chi2
            for k in range(1, 6):
                phi = m.phi.scaled(k)
                paths = [_run(m, phi).chi2]
                if m.quotient.kind == "abelian":
                    paths.append(_run(m, phi, reduce=False).chi2)
                for got in paths:
                    checks += 1
                    if got != k * base:
                        bad.append(f"{m.name} k={k}: {got} != {k * base}")
        return not bad, f"{checks} checks over the corpus" + ("" if not bad else ": " + "; ".join(bad[:5]))
    return _timed(4, "scaling law chi(k phi) = k chi(phi)", None, body)


def c05_column_choice() -> Criterion:
    def body():
        tested, bad = [], []
        for m in load_corpus():
            cols = valid_columns(m.presentation, m.quotient)
            rows = valid_rows(m.presentation, m.quotient, m.dual) if m.dual else [None]
            if len(cols) * len(rows) < 2:
                continue
            values = set()
            for c in cols:
                for r in rows:
                    kw = {"column": c} if r is None else {"column": c, "row": r}
                    values.add(_run(m, **kw).chi2)
            tested.append(m.name)
            if len(values) != 1:
                bad.append(f"{m.name}: {sorted(values)}")
        ok = len(tested) >= 5 and not bad
        return ok, f"{len(tested)} presentations, " + ("all choices agree" if not bad else "; ".join(bad))
    return _timed(5, "column-choice independence", None, body)


# ---------------------------------------------------------------------------
# ring-level properties

TWISTS = [
    Twist.untwisted(1),
    Twist([[-1]]),
    Twist.untwisted(2),
    Twist([[0, -1], [1, 0]]),
    Twist([[1, 1], [0, 1]]),
    Twist([[2, 1], [1, 1]]),
]


def c06_degree_oracle() -> Criterion:
    def body():
        rng = random.Random(6)
        count, bad = 0, 0
        while count < 200:
            tw = TWISTS[count % len(TWISTS)]
            x = random_element(rng, tw, span=rng.randint(0, 3), coeff_terms=2)
            if not x:
                continue
            count += 1
            oracle = window_coker_dim([[x]])
            if not (oracle == x.degree() == coker_dim([[x]])):
                bad += 1
        return bad == 0, f"{count} elements over {len(TWISTS)} twists, {bad} mismatches"
    return _timed(6, "dim coker(r_x) = deg(x) (window oracle)", 30.0, body)


def c07_ik_bound() -> Criterion:
    def body():
        rng = random.Random(7)
        injective = 0
        for i in range(100):
            tw = TWISTS[i % 4]
            n = rng.randint(1, 4)
            k = rng.randint(0, n)
            a = [[random_field_element(rng, tw.k, 2, 3, True) if rng.random() < 0.6
                  else random_field_element(rng, tw.k, 1, 0, False) for _ in range(n)] for _ in range(n)]
            report = ik_bound_check(a, k, tw)
            injective += report.injective
        return True, f"100 instances ({injective} injective), bound held on all"
    return _timed(7, "dim coker(A + u I_k) <= k", 60.0, body)


def _random_laurent(rng, nvars: int, degree: int, terms: int) -> LaurentPoly:
    while True:
        f = LaurentPoly(nvars, {
            tuple(rng.randint(-degree // 2, degree - degree // 2) for _ in range(nvars)): rng.choice([-3, -2, -1, 1, 2, 3])
            for _ in range(terms)
        })
        if f:
            return f


def c08_newton_product() -> Criterion:
    def body():
        rng = random.Random(8)
        bad = 0
        for i in range(100):
            n = 1 + i % 3
            f = _random_laurent(rng, n, rng.randint(1, 5), rng.randint(1, 6))
            g = _random_laurent(rng, n, rng.randint(1, 5), rng.randint(1, 6))
            if newton_polytope(f * g) != newton_polytope(f) + newton_polytope(g):
                bad += 1
        return bad == 0, f"100 pairs in 1-3 variables, {bad} failures"
    return _timed(8, "Newton polytope product law", None, body)


def _random_primitive(rng, n: int) -> List[int]:
    while True:
        v = [rng.randint(-4, 4) for _ in range(n)]
        g = 0
        for x in v:
            g = gcd(g, x)
        if g == 1:
            return v


def c09_bridge() -> Criterion:
    def body():
        rng = random.Random(9)
        bad = 0
        for i in range(100):
            n = 1 + i % 3
            grp = AbelianGroup(n)
            f = _random_laurent(rng, n, rng.randint(1, 4), rng.randint(1, 5))
            phi = _random_primitive(rng, n)
            q = QuotientSpec.abelian([[int(i == j) for j in range(n)] for i in range(n)])
            split, k, _ = split_along_phi(q, phi)
            x = GroupRingElement(grp, f.terms)
            lhs = d_eval(polytope_of_unit(f), phi)
            if k != 1 or lhs != Fraction(split.rewrite(x).degree(), 2):
                bad += 1
        return bad == 0, f"100 elements with surjective phi, {bad} failures"
    return _timed(9, "polytope bridge d_eval = deg/2", None, body)


def random_word(rng, ngens: int, length: int) -> FreeWord:
    return reduce_word([(rng.randrange(ngens), rng.choice((1, -1))) for _ in range(length)])


def c10_fox_identity() -> Criterion:
    def body():
        rng = random.Random(10)
        groups = [
            (AbelianGroup(2), lambda: (rng.randint(-2, 2), rng.randint(-2, 2))),
            (PolyZGroup([[2, 1], [1, 1]]), lambda: ((rng.randint(-2, 2), rng.randint(-2, 2)), rng.randint(-2, 2))),
            (PolyZGroup([[-1]]), lambda: ((rng.randint(-2, 2),), rng.randint(-2, 2))),
        ]
        bad = 0
        for i in range(200):
            grp, draw = groups[i % len(groups)]
            ngens = rng.randint(1, 4)
            images = [grp.validate(draw()) for _ in range(ngens)]
            w = random_word(rng, ngens, rng.randint(0, 12))
            one = GroupRingElement.one(grp)
            total = GroupRingElement.zero(grp)
            for g in range(ngens):
                total = total + fox_derivative(w, g, grp, images) * (GroupRingElement.of(grp, images[g]) - one)
            if total != GroupRingElement.of(grp, word_image(w, grp, images)) - one:
                bad += 1
        return bad == 0, f"200 words over abelian and polyZ groups, {bad} failures"
    return _timed(10, "fundamental Fox identity", None, body)


def c11_seifert() -> Criterion:
    def body():
        s = seifert_chi2(Orbifold(0, 1, (2, 3)), 6)
        p = _run(_corpus_entry("trefoil")).chi2
        return s == -1 == p, f"Seifert formula {s}, Fox pipeline {p}"
    return _timed(11, "Seifert cross-check", None, body)


def _random_polytope(rng, dim: int) -> IntegralPolytope:
    return IntegralPolytope([tuple(rng.randint(-2, 2) for _ in range(dim)) for _ in range(rng.randint(1, 5))])


def c12_polytope_group() -> Criterion:
    def body():
        rng = random.Random(12)
        bad = 0
        for i in range(100):
            dim = 1 + i % 3
            p, q, r = (_random_polytope(rng, dim) for _ in range(3))
            a = PolytopeDifference(p, q)
            b = PolytopeDifference(r, _random_polytope(rng, dim))
            zero = PolytopeDifference.zero(dim)
            checks = [
                ((p + r) == (q + r)) == (p == q),  # Radstrom cancellation
                difference_equal(PolytopeDifference(p + r, q + r), a),
                a - a == zero,
                a + b == b + a,
                (a + b) - b == a,
                a + zero == a,
                (a == b) == (b == a),
            ]
            bad += not all(checks)
        return bad == 0, f"100 instances in dimension 1-3, {bad} failures"
    return _timed(12, "polytope group axioms", None, body)


def c13_det_degree() -> Criterion:
    def body():
        rng = random.Random(13)
        count, attempts, bad = 0, 0, 0
        while count < 100 and attempts < 1000:
            attempts += 1
            tw = TWISTS[attempts % 4]
            n = rng.choice((1, 2, 2, 3))
            m = [[random_element(rng, tw, span=1, coeff_terms=1, denominators=False) for _ in range(n)]
                 for _ in range(n)]
            if not diagonalize(m).injective:
                continue
            count += 1
            _, deg = dieudonne_det(m)
            if deg != window_coker_dim(m):
                bad += 1
        return count >= 100 and bad == 0, f"{count} injective matrices, {bad} mismatches with the window oracle"
    return _timed(13, "degree of det class = dim coker", None, body)


def c14_infinite_cyclic() -> Criterion:
    def body():
        v = infinite_cyclic_chi2(2, True, 1)
        p = _run(_corpus_entry("trefoil")).chi2
        return v == -1 == p, f"infinite cyclic cover {v}, Fox pipeline {p}"
    return _timed(14, "infinite cyclic cover oracle", None, body)


CRITERIA = [
    c01_trefoil, c02_figure_eight, c03_torus_knots, c04_scaling, c05_column_choice,
    c06_degree_oracle, c07_ik_bound, c08_newton_product, c09_bridge, c10_fox_identity,
    c11_seifert, c12_polytope_group, c13_det_degree, c14_infinite_cyclic,
]


def run_all(echo: Optional[Callable[[str], None]] = None) -> List[Criterion]:
    out = []
    for fn in CRITERIA:
        c = fn()
        if echo:
            echo(c.line())
        out.append(c)
    return out
