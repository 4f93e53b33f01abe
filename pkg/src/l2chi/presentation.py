"""Free-group words, finite presentations, Fox calculus and abelianization."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from l2chi.intmat import smith_normal_form
from l2chi.ring.groupring import GroupRingElement

Letter = Tuple[int, int]


class PresentationError(ValueError):
    """Malformed word, unknown generator, or inconsistent presentation."""


def reduce_word(raw: Sequence[Letter], ngens: Optional[int] = None) -> "FreeWord":
    """Freely reduce a sequence of ``(generator, +-1)`` letters."""
    out: List[Letter] = []
    for g, s in raw:
        if s not in (1, -1):
            raise PresentationError(f"letter sign must be +-1, got {s}")
        if g < 0 or (ngens is not None and g >= ngens):
            raise PresentationError(f"unknown generator index {g}")
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return FreeWord(tuple(out))


@dataclass(frozen=True)
class FreeWord:
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        for (g, s), (h, t) in zip(self.letters, self.letters[1:]):
            if g == h and s == -t:
                raise PresentationError("word is not freely reduced")

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return reduce_word(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -s) for g, s in reversed(self.letters)))

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=-1)

    def exponent_sums(self, ngens: int) -> List[int]:
        out = [0] * ngens
        for g, s in self.letters:
            out[g] += s
        return out

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return " ".join(names[g] if s > 0 else f"{names[g]}^-1" for g, s in self.letters)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?$")


def parse_word(text: str, names: Sequence[str]) -> FreeWord:
    """Parse a word.

    Two syntaxes are accepted.  Token mode: whitespace-separated ``name``,
    ``name^-1`` or ``name^k``.  Compact mode (no whitespace, all generators
    single lowercase letters): each character is a generator and an uppercase
    letter is the inverse of its lowercase form.  ``1`` or the empty string is
    the trivial word.
    """
    index = {n: i for i, n in enumerate(names)}
    text = text.strip()
    if text in ("", "1"):
        return FreeWord()
    letters: List[Letter] = []
    compact = (
        " " not in text
        and text.isalpha()
        and all(len(n) == 1 and n.islower() for n in names)
        and text not in index
    )
    if compact:
        for ch in text:
            if ch in index:
                letters.append((index[ch], 1))
            elif ch.lower() in index:
                letters.append((index[ch.lower()], -1))
            else:
                raise PresentationError(f"unknown generator {ch!r} in word {text!r}")
        return reduce_word(letters)
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise PresentationError(f"malformed token {tok!r} in word {text!r}")
        name, power = m.group(1), int(m.group(2) or 1)
        if name not in index:
            raise PresentationError(f"unknown generator {name!r} in word {text!r}")
        g = index[name]
        letters.extend([(g, 1 if power > 0 else -1)] * abs(power))
    return reduce_word(letters)


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relators: Tuple[FreeWord, ...]
    name: str = ""

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator names")
        for r in self.relators:
            if r.max_generator() >= len(self.generators):
                raise PresentationError("relator references an undeclared generator")

    @classmethod
    def parse(cls, generators: Sequence[str], relators: Sequence[str], name: str = "") -> "Presentation":
        gens = tuple(generators)
        return cls(gens, tuple(parse_word(r, gens) for r in relators), name)

    @property
    def deficiency(self) -> int:
        return len(self.generators) - len(self.relators)

    def exponent_matrix(self) -> List[List[int]]:
        return [r.exponent_sums(len(self.generators)) for r in self.relators]


# ---------------------------------------------------------------------------
# Fox calculus, pushed forward through a quotient map


def word_image(w: FreeWord, group, images: Sequence) -> object:
    inverses = [group.inv(x) for x in images]
    g = group.identity()
    for i, s in w.letters:
        g = group.mul(g, images[i] if s > 0 else inverses[i])
    return g


def fox_derivative(w: FreeWord, gen: int, group, images: Sequence) -> GroupRingElement:
    """Image under the quotient map of the Fox derivative of ``w`` by ``gen``.

    A letter ``x`` contributes ``+prefix`` (the prefix before it) and ``x^-1``
    contributes ``-prefix * x^-1``.
    """
    inverses = [group.inv(x) for x in images]
    terms: Dict[object, object] = {}
    prefix = group.identity()
    for i, s in w.letters:
        if s > 0:
            if i == gen:
                terms[prefix] = terms.get(prefix, 0) + 1
            prefix = group.mul(prefix, images[i])
        else:
            prefix = group.mul(prefix, inverses[i])
            if i == gen:
                terms[prefix] = terms.get(prefix, 0) - 1
    return GroupRingElement(group, terms)


def fox_matrix(p: Presentation, group, images: Sequence) -> List[List[GroupRingElement]]:
    """Rows indexed by relators, columns by generators."""
    return [[fox_derivative(r, i, group, images) for i in range(len(p.generators))] for r in p.relators]


# ---------------------------------------------------------------------------
# abelianization


@dataclass(frozen=True)
class AbelianizationData:
    free_rank: int
    torsion: Tuple[int, ...]
    projection: Tuple[Tuple[int, ...], ...] = field(default=())

    def generator_image(self, i: int) -> Tuple[int, ...]:
        return tuple(row[i] for row in self.projection)


def abelianization(p: Presentation) -> AbelianizationData:
    """H_1 of the presented group: free rank, torsion, and the free projection."""
    a = len(p.generators)
    if not p.relators:
        proj = tuple(tuple(int(i == j) for j in range(a)) for i in range(a))
        return AbelianizationData(a, (), proj)
    # H_1 = Z^a / rowspace(M); with L M R = D the coordinates y = x R make the
    # relation lattice diagonal, so generator e_i goes to row i of R
    m = p.exponent_matrix()
    divisors, _, right = smith_normal_form(m)
    rank = len(divisors)
    torsion = tuple(d for d in divisors if d > 1)
    proj = tuple(tuple(right[i][r] for i in range(a)) for r in range(rank, a))
    return AbelianizationData(a - rank, torsion, proj)
