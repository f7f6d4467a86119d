"""JSON documents for fuzzy sets and families.

A fuzzy set document is ``{"dim": m, "levels": [...], "cuts": [[point, ...], ...]}``
with strictly increasing levels in (0, 1] and nested cuts.  Dumps use sorted
keys and Python's shortest round-trip float repr, so load followed by dump
is byte-stable.
"""

from __future__ import annotations

import json
import math
from numbers import Real
from pathlib import Path

from .fuzzy import LevelFuzzySet, RepresentationError, from_level_family
from .geometry import DimensionMismatch, PointCloud

_FIELDS = {"dim", "levels", "cuts"}


class SchemaError(ValueError):
    """Malformed document; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


def _is_number(x) -> bool:
    return isinstance(x, Real) and not isinstance(x, bool) and math.isfinite(x)


def fuzzy_from_dict(doc, where: str = "") -> LevelFuzzySet:
    """Validate a document and build the fuzzy set.

    Raises:
        SchemaError: wrong types, unknown or missing fields, invalid levels or
            non-nested cuts.
        DimensionMismatch: a point whose coordinate count differs from ``dim``.
    """
    def f(name: str) -> str:
        return f"{where}.{name}" if where else name

    if not isinstance(doc, dict):
        raise SchemaError(where or "document", "expected a JSON object")
    missing = _FIELDS - set(doc)
    if missing:
        raise SchemaError(f(sorted(missing)[0]), "missing field")
    extra = set(doc) - _FIELDS
    if extra:
        raise SchemaError(f(sorted(extra)[0]), "unknown field")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f("dim"), "expected a positive integer")
    levels = doc["levels"]
    if not isinstance(levels, list) or not all(_is_number(a) for a in levels):
        raise SchemaError(f("levels"), "expected a list of finite numbers")
    cuts = doc["cuts"]
    if not isinstance(cuts, list):
        raise SchemaError(f("cuts"), "expected a list of point lists")
    if len(cuts) != len(levels):
        raise SchemaError(f("cuts"), f"{len(cuts)} cuts for {len(levels)} levels")
    clouds = []
    for i, c in enumerate(cuts):
        if not isinstance(c, list):
            raise SchemaError(f(f"cuts[{i}]"), "expected a list of points")
        for j, p in enumerate(c):
            if not isinstance(p, list) or not all(_is_number(x) for x in p):
                raise SchemaError(f(f"cuts[{i}][{j}]"), "expected a list of finite numbers")
            if len(p) != dim:
                raise DimensionMismatch(
                    f"{f(f'cuts[{i}][{j}]')}: {len(p)} coordinates, dim is {dim}")
        clouds.append(PointCloud(dim, [[float(x) for x in p] for p in c]))
    try:
        return from_level_family(dim, [float(a) for a in levels], clouds)
    except RepresentationError as exc:
        field = "cuts" if "cut" in str(exc) else "levels"
        raise SchemaError(f(field), str(exc)) from None


def fuzzy_to_dict(u: LevelFuzzySet) -> dict:
    return {
        "dim": u.dim,
        "levels": [float(a) for a in u.levels],
        "cuts": [c.points.tolist() for c in u.cuts],
    }


def dumps_fuzzy(u: LevelFuzzySet) -> str:
    return json.dumps(fuzzy_to_dict(u), sort_keys=True)


def _parse(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(where, f"invalid JSON ({exc.msg} at line {exc.lineno})") from None


def loads_fuzzy(text: str) -> LevelFuzzySet:
    return fuzzy_from_dict(_parse(text, "document"))


def load_fuzzy(path) -> LevelFuzzySet:
    return loads_fuzzy(Path(path).read_text())


def save_fuzzy(u: LevelFuzzySet, path) -> None:
    Path(path).write_text(dumps_fuzzy(u) + "\n")


def family_from_dict(doc) -> list[LevelFuzzySet]:
    """Members of a family document ``{"members": [document, ...]}``."""
    if not isinstance(doc, dict) or not isinstance(doc.get("members"), list):
        raise SchemaError("members", "expected an object with a list of documents")
    if not doc["members"]:
        raise SchemaError("members", "a family needs at least one member")
    members = [fuzzy_from_dict(m, f"members[{i}]") for i, m in enumerate(doc["members"])]
    dims = {m.dim for m in members}
    if len(dims) > 1:
        raise DimensionMismatch(f"members: mixed dimensions {sorted(dims)}")
    return members


def dumps_family(members) -> str:
    return json.dumps({"members": [fuzzy_to_dict(m) for m in members]}, sort_keys=True)


def load_json(source: str, where: str = "input"):
    """Parse ``source`` as inline JSON when it starts with ``{``, else as a file path."""
    text = source if source.lstrip().startswith("{") else _read(source, where)
    return _parse(text, where)


def _read(path: str, where: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SchemaError(where, f"cannot read {path!r}: {exc.strerror}") from None
