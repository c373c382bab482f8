"""JSON encoding of every object the command line reads or writes.

Labels are strings.  Idyll values are strings too: "1", "-1", residues for
GF(p), and decimal or fractional literals for T.  The base point of a
pointed set is written "0".
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any

from .classical import ClassicalMatroid, PointedMap
from .errors import QmatError
from .idyll import Idyll, idyll_by_name
from .matroid import Matroid, PlueckerVector, gp_validate
from .morphism import SubmonomialMatrix
from .quiver import F1Rep, Quiver, grading_from_labels
from .quiver_matroid import QuiverMatroid

BASE_POINT = "0"


class ParseError(QmatError):
    pass


def read_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def corpus_path(name: str) -> Path:
    return Path(str(resources.files("qmat") / "corpus" / name))


def load_corpus(name: str) -> Any:
    return read_json(corpus_path(name))


def _require(data: dict, *keys):
    if not isinstance(data, dict):
        raise ParseError("expected a JSON object")
    missing = [k for k in keys if k not in data]
    if missing:
        raise ParseError(f"missing field(s): {', '.join(missing)}")


def _value(idyll: Idyll, text) -> Any:
    try:
        return idyll.parse(text)
    except (ValueError, ZeroDivisionError, QmatError) as exc:
        raise ParseError(f"{text!r} is not a value of {idyll.name}: {exc}") from None


# matroids


def _key(labels) -> str:
    return ",".join(str(e) for e in labels)


def _split_key(key: str) -> tuple:
    return tuple(part.strip() for part in key.split(",")) if key.strip() else ()


def pluecker_from_json(data: dict) -> PlueckerVector:
    _require(data, "idyll", "ground", "rank", "values")
    idyll = idyll_by_name(data["idyll"])
    ground = tuple(str(e) for e in data["ground"])
    values = {_split_key(k): _value(idyll, v) for k, v in data["values"].items()}
    return PlueckerVector(idyll, ground, int(data["rank"]), values)


def matroid_from_json(data: dict) -> Matroid:
    return gp_validate(pluecker_from_json(data))


def matroid_to_json(M: Matroid) -> dict:
    return {
        "idyll": M.idyll.name,
        "ground": [str(e) for e in M.ground],
        "rank": M.rank,
        "values": {_key(M.ground[i] for i in key): M.idyll.format(v) for key, v in sorted(M.values.items())},
    }


def vector_to_json(M: Matroid, vec) -> dict:
    return {str(e): M.idyll.format(v) for e, v in zip(M.ground, vec) if v}


def vectors_to_json(M: Matroid, vecs) -> list:
    order = sorted(vecs, key=lambda v: [M.idyll.sort_key(x) for x in v])
    return [[M.idyll.format(x) for x in v] for v in order]


# morphisms


def morphism_from_json(data: dict) -> SubmonomialMatrix:
    _require(data, "source", "target", "idyll", "entries")
    idyll = idyll_by_name(data["idyll"])
    entries = {}
    for item in data["entries"]:
        _require(item, "from", "to")
        s = str(item["from"])
        if s in entries:
            raise ParseError(f"two entries in column {s!r}")
        entries[s] = (str(item["to"]), _value(idyll, item.get("coeff", "1")))
    return SubmonomialMatrix(idyll, [str(e) for e in data["source"]], [str(e) for e in data["target"]], entries)


def morphism_to_json(phi: SubmonomialMatrix) -> dict:
    return {
        "source": [str(e) for e in phi.source],
        "target": [str(e) for e in phi.target],
        "idyll": phi.idyll.name,
        "entries": [{"from": str(s), "to": str(t), "coeff": phi.idyll.format(c)}
                    for s, (t, c) in phi.entries.items()],
    }


# classical matroids and strong maps


def classical_from_json(data: dict) -> ClassicalMatroid:
    _require(data, "ground", "bases")
    return ClassicalMatroid([str(e) for e in data["ground"]], [[str(e) for e in b] for b in data["bases"]])


def classical_to_json(M: ClassicalMatroid) -> dict:
    return {"ground": [str(e) for e in M.ground], "bases": [[str(e) for e in b] for b in M.bases()]}


def strong_map_from_json(data: dict, source, target) -> PointedMap:
    _require(data, "map")
    mapping = {}
    for s, t in data["map"].items():
        mapping[str(s)] = None if str(t) == BASE_POINT else str(t)
    return PointedMap(source, target, mapping)


def strong_map_to_json(sigma: PointedMap) -> dict:
    return {"map": {str(s): BASE_POINT if t is None else str(t) for s, t in sigma.mapping.items()}}


# representations


def rep_from_json(data: dict) -> F1Rep:
    _require(data, "vertices", "arrows", "sets", "maps")
    arrows = []
    for a in data["arrows"]:
        _require(a, "name", "from", "to")
        arrows.append((str(a["name"]), str(a["from"]), str(a["to"])))
    quiver = Quiver([str(v) for v in data["vertices"]], arrows)
    sets = {str(v): [str(e) for e in labels] for v, labels in data["sets"].items()}
    maps = {}
    for name, m in data["maps"].items():
        maps[str(name)] = {str(e): (None if str(f) == BASE_POINT else str(f)) for e, f in m.items()}
    return F1Rep(quiver, sets, maps)


def rep_to_json(rep: F1Rep) -> dict:
    return {
        "vertices": [str(v) for v in rep.quiver.vertices],
        "arrows": [{"name": str(a.name), "from": str(a.source), "to": str(a.target)} for a in rep.quiver.arrows],
        "sets": {str(v): [str(e) for e in rep.sets[v]] for v in rep.quiver.vertices},
        "maps": {str(name): {str(e): BASE_POINT if f is None else str(f) for e, f in m.items()}
                 for name, m in rep.maps.items()},
    }


def grading_from_json(data: dict, rep: F1Rep) -> dict:
    _require(data, "values")
    return grading_from_labels(rep, data["values"])


def gradings_from_json(data, rep: F1Rep) -> list[dict]:
    """A single grading object, a list of them, or {"sequence": [...]}."""
    if isinstance(data, dict) and "sequence" in data:
        data = data["sequence"]
    if isinstance(data, dict):
        data = [data]
    return [grading_from_json(g, rep) for g in data]


def grading_to_json(grading: dict) -> dict:
    labels = [e for _, e in grading]
    unique = len(set(labels)) == len(labels)
    return {"values": {(str(e) if unique else f"{v}:{e}"): value for (v, e), value in grading.items()}}


def point_to_json(point: QuiverMatroid) -> dict:
    out = {}
    for v, M in point.vertex_matroids.items():
        out[str(v)] = {_key(M.ground[i] for i in key): M.idyll.format(val) for key, val in sorted(M.values.items())}
    return out


def parse_rank(text: str, rep: F1Rep) -> dict:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != len(rep.quiver.vertices):
        raise ParseError(f"rank vector needs {len(rep.quiver.vertices)} entries, got {len(parts)}")
    try:
        return {v: int(p) for v, p in zip(rep.quiver.vertices, parts)}
    except ValueError:
        raise ParseError(f"rank vector {text!r} is not a list of integers") from None
