"""Presentation files (YAML) and line-delimited JSON run records.

A presentation file holds one manifold::

    name: trefoil
    generators: [x, y]
    relators: ["x y x y^-1 x^-1 y^-1"]
    quotient:
      kind: abelian            # abelian | polyZ | abelianization
      images: {x: [1], y: [1]}
    phi: [1]
    dual_generators: [...]     # closed manifolds only
    metadata: {genus: 1, expected_norm: 1}

For ``kind: polyZ`` add ``matrix: [[...]]`` and give images as
``[vector, m]`` pairs; ``phi`` is then the integer ``c`` in ``phi(v, m) = c m``.
``kind: abelianization`` needs no images and uses the free part of H_1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml

from l2chi.euler import PhiSpec, QuotientError, QuotientSpec, abelianization_quotient
from l2chi.presentation import FreeWord, Presentation, PresentationError, parse_word

SCHEMA = "l2chi.record/1"
SUFFIXES = (".yaml", ".yml")


class InputError(ValueError):
    """Unreadable or malformed input file."""


@dataclass
class ManifoldInput:
    name: str
    presentation: Presentation
    quotient: QuotientSpec
    phi: PhiSpec
    dual: Optional[List[FreeWord]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)
    path: Optional[str] = None

    @property
    def closed(self) -> bool:
        return bool(self.dual)


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    return doc[key]


def _images(raw, gens: Sequence[str], where: str) -> List:
    if isinstance(raw, dict):
        missing = [g for g in gens if g not in raw]
        if missing:
            raise InputError(f"{where}: no image for generator(s) {missing}")
        extra = set(raw) - set(gens)
        if extra:
            raise InputError(f"{where}: images for unknown generator(s) {sorted(extra)}")
        return [raw[g] for g in gens]
    if isinstance(raw, list) and len(raw) == len(gens):
        return list(raw)
    raise InputError(f"{where}: images must map every generator")


def parse_quotient(doc: dict, p: Presentation, where: str) -> QuotientSpec:
    kind = _require(doc, "kind", where)
    try:
        if kind == "abelianization":
            return abelianization_quotient(p)
        imgs = _images(_require(doc, "images", where), p.generators, where)
        if kind == "abelian":
            return QuotientSpec.abelian([[int(x) for x in v] for v in imgs], doc.get("rank"))
        if kind == "polyZ":
            pairs = []
            for v in imgs:
                if not (isinstance(v, list) and len(v) == 2 and isinstance(v[0], list)):
                    raise InputError(f"{where}: polyZ image {v!r} must be [vector, m]")
                pairs.append((v[0], v[1]))
            return QuotientSpec.poly_z(_require(doc, "matrix", where), pairs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{where}: {exc}") from exc
    raise InputError(f"{where}: unknown quotient kind {kind!r}")


def parse_document(doc: Any, where: str = "<input>") -> ManifoldInput:
    if not isinstance(doc, dict):
        raise InputError(f"{where}: expected a mapping at top level")
    gens = _require(doc, "generators", where)
    rels = _require(doc, "relators", where)
    if not isinstance(gens, list) or not isinstance(rels, list):
        raise InputError(f"{where}: generators and relators must be lists")
    name = str(doc.get("name") or Path(where).stem)
    try:
        p = Presentation.parse([str(g) for g in gens], [str(r) for r in rels], name)
        dual = doc.get("dual_generators")
        dual_words = [parse_word(str(w), p.generators) for w in dual] if dual else None
    except PresentationError as exc:
        raise InputError(f"{where}: {exc}") from exc
    q = parse_quotient(_require(doc, "quotient", where), p, where)
    raw_phi = _require(doc, "phi", where)
    try:
        phi = PhiSpec.of(raw_phi)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: bad phi {raw_phi!r}") from exc
    meta = dict(doc.get("metadata") or {})
    for key in ("expected_norm", "genus"):
        if key in doc:
            meta.setdefault(key, doc[key])
    try:
        q.check(p)
        phi.evaluate(q, q.group().identity())
    except QuotientError as exc:
        raise InputError(f"{where}: {exc}") from exc
    return ManifoldInput(name, p, q, phi, dual_words, meta, where)


def load_input(path) -> ManifoldInput:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InputError(f"{path}: invalid YAML ({exc})") from exc
    return parse_document(doc, str(path))


def expand_paths(paths: Sequence) -> List[Path]:
    """Files as given; directories contribute their YAML files sorted by name."""
    out: List[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            out.extend(sorted(f for f in p.iterdir() if f.suffix in SUFFIXES and f.is_file()))
        else:
            out.append(p)
    return out


def dump_document(m: ManifoldInput) -> str:
    """YAML text for an input, in the format :func:`load_input` reads."""
    gens = list(m.presentation.generators)
    q = m.quotient
    if q.kind == "abelian":
        quot = {"kind": "abelian", "rank": q.n, "images": {g: list(v) for g, v in zip(gens, q.images)}}
    else:
        quot = {"kind": "polyZ", "matrix": [list(r) for r in q.matrix],
                "images": {g: [list(v), m_] for g, (v, m_) in zip(gens, q.images)}}
    doc = {
        "name": m.name,
        "generators": gens,
        "relators": [r.format(gens) for r in m.presentation.relators],
        "quotient": quot,
        "phi": list(m.phi.values) if q.kind == "abelian" else m.phi.values[0],
    }
    if m.dual:
        doc["dual_generators"] = [w.format(gens) for w in m.dual]
    if m.metadata:
        doc["metadata"] = dict(m.metadata)
    return yaml.safe_dump(doc, sort_keys=False)


# ---------------------------------------------------------------------------
# records


def make_record(input_name: str, command: str, result: Optional[dict] = None,
                error: Optional[dict] = None, wall_time: float = 0.0, version: str = "") -> dict:
    return {
        "schema": SCHEMA,
        "input": input_name,
        "command": command,
        "result": result,
        "error": error,
        "wall_time": round(wall_time, 6),
        "version": version,
    }


def record_to_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def line_to_record(line: str) -> dict:
    rec = json.loads(line)
    if not isinstance(rec, dict) or rec.get("schema") != SCHEMA:
        raise InputError(f"not a {SCHEMA} record")
    return rec
