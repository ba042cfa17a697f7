"""JSON instance, topology and spec files.

Canonical instance form: sorted keys, sorted sum triples, no insignificant
whitespace, newline-terminated.
"""
from __future__ import annotations

import json
from pathlib import Path

from .constructors import IntervalSpec, PastingSpec
from .core import OrthoAlgebraTable
from .topology import FiniteTopology, from_subbase


class InstanceFormatError(ValueError):
    """The file could not be parsed as the expected JSON document."""


def _load(source) -> dict:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text() if isinstance(source, Path) else source
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceFormatError("expected a JSON object")
    return data


def _int(data, key):
    v = data.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise InstanceFormatError(f"'{key}' must be an integer")
    return v


def table_from_json(source) -> OrthoAlgebraTable:
    data = _load(source)
    size, zero, one = _int(data, "size"), _int(data, "zero"), _int(data, "one")
    if size < 1:
        raise InstanceFormatError("'size' must be positive")
    triples = data.get("sum", [])
    if not isinstance(triples, list) or not all(
            isinstance(t, list) and len(t) == 3 and all(isinstance(v, int) for v in t) for t in triples):
        raise InstanceFormatError("'sum' must be a list of [a, b, c] integer triples")
    labels = data.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != size):
        raise InstanceFormatError("'labels' must list one label per element")
    try:
        return OrthoAlgebraTable.from_triples(size, zero, one, triples, labels)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from exc


def table_to_json(table: OrthoAlgebraTable) -> dict:
    out = {"size": table.size, "zero": table.zero, "one": table.one, "sum": table.triples()}
    if table.labels is not None:
        out["labels"] = list(table.labels)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"


def dumps_table(table: OrthoAlgebraTable) -> str:
    return dumps(table_to_json(table))


def read_table(path) -> OrthoAlgebraTable:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceFormatError(str(exc)) from exc
    return table_from_json(text)


def write_table(table: OrthoAlgebraTable, path) -> None:
    Path(path).write_text(dumps_table(table))


def topology_from_json(source) -> FiniteTopology:
    """``{"size": n, "subbase": [[...], ...]}`` or ``{"size": n, "preorder": [[i, j], ...]}``."""
    data = _load(source)
    n = _int(data, "size")
    try:
        if "preorder" in data:
            return FiniteTopology.from_preorder_pairs(n, data["preorder"])
        return from_subbase(n, data.get("subbase", []))
    except (ValueError, IndexError, TypeError) as exc:
        raise InstanceFormatError(f"bad topology: {exc}") from exc


def pasting_spec_from_json(source) -> PastingSpec:
    """``{"atoms": [...names...], "blocks": [[...names...], ...]}``."""
    data = _load(source)
    try:
        return PastingSpec(tuple(data["atoms"]), tuple(frozenset(b) for b in data["blocks"]))
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"bad pasting spec: {exc}") from exc


def interval_spec_from_json(source) -> IntervalSpec:
    """``{"dim": d, "e": [...], "elements": [[...], ...]}`` (elements optional)."""
    data = _load(source)
    try:
        e = tuple(data["e"])
        elements = data.get("elements")
        return IntervalSpec(int(data.get("dim", len(e))), e,
                            None if elements is None else tuple(tuple(v) for v in elements))
    except (KeyError, TypeError) as exc:
        raise InstanceFormatError(f"bad interval spec: {exc}") from exc
