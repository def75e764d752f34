"""JSON file formats for bundles and bundle maps.

Bundle:      {"fibers": [k_0, ..., k_{B-1}]}
             or {"projection": [...], "base": n} for an arbitrary function,
             normalised on load.
BundleMap:   {"src": <bundle>, "dst": <bundle>, "base_map": [...], "total_map": [...]}
             where <bundle> is an inline bundle object or a path relative to
             the map file.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .bundle import Bundle, BundleMap, Ingestion, normalize
from .errors import DirichletError, ValidationError
from .finset import FinFunction, FinSet


class InputError(ValidationError):
    """A file could not be read or violates its schema."""

    def __init__(self, message: str, invariant: str, source: str | None = None,
                 field: str | None = None):
        where = ":".join(p for p in (source, field) if p)
        super().__init__(f"{where}: {message}" if where else message, invariant)
        self.source = source
        self.field = field


def _int_list(value: Any, field: str, source: str | None) -> list[int]:
    if not isinstance(value, list) or any(
            not isinstance(v, int) or isinstance(v, bool) for v in value):
        raise InputError("must be a list of integers", f"{field} is a list of ints",
                         source, field)
    return value


def bundle_from_json(data: Any, source: str | None = None) -> Bundle:
    return ingest_bundle(data, source).bundle


def ingest_bundle(data: Any, source: str | None = None) -> Ingestion:
    if not isinstance(data, dict):
        raise InputError("bundle must be a JSON object", "bundle schema", source)
    if "fibers" in data:
        fibers = _int_list(data["fibers"], "fibers", source)
        if any(k < 0 for k in fibers):
            raise InputError("fiber sizes must be nonnegative", "fiber sizes >= 0",
                             source, "fibers")
        b = Bundle(tuple(fibers))
        return Ingestion(b, FinFunction(b.total, b.total, tuple(range(b.total.size))))
    if "projection" in data:
        proj = _int_list(data["projection"], "projection", source)
        base = data.get("base", max(proj, default=-1) + 1)
        if not isinstance(base, int) or base < 0:
            raise InputError("base must be a nonnegative int", "base >= 0", source, "base")
        try:
            pi = FinFunction(FinSet(len(proj)), FinSet(base), tuple(proj))
        except ValidationError as exc:
            raise InputError(str(exc), exc.invariant, source, "projection") from exc
        return normalize(pi)
    raise InputError("missing 'fibers'", "bundle schema", source, "fibers")


def bundle_to_json(b: Bundle) -> dict:
    return {"fibers": list(b.fiber_sizes)}


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read file: {exc.strerror}", "readable file", str(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}", "valid JSON", str(path))


def load_bundle(path: str | Path) -> Bundle:
    return bundle_from_json(read_json(path), str(path))


def _sub_bundle(value: Any, field: str, source: str | None) -> Bundle:
    if isinstance(value, str):
        base = Path(source).parent if source else Path(".")
        return load_bundle(base / value)
    if isinstance(value, list):
        value = {"fibers": value}
    return bundle_from_json(value, f"{source}:{field}" if source else field)


def map_from_json(data: Any, source: str | None = None, check: bool = True) -> BundleMap:
    """Parse a bundle map.  With ``check=False`` the commuting square is not
    enforced; the raw parts are returned as a tuple instead."""
    if not isinstance(data, dict):
        raise InputError("bundle map must be a JSON object", "map schema", source)
    for key in ("src", "dst", "base_map", "total_map"):
        if key not in data:
            raise InputError(f"missing '{key}'", "map schema", source, key)
    src = _sub_bundle(data["src"], "src", source)
    dst = _sub_bundle(data["dst"], "dst", source)
    parts = {}
    for key, dom, cod in (("base_map", src.base, dst.base), ("total_map", src.total, dst.total)):
        table = _int_list(data[key], key, source)
        try:
            parts[key] = FinFunction(dom, cod, tuple(table))
        except ValidationError as exc:
            raise InputError(str(exc), exc.invariant, source, key) from exc
    if not check:
        return src, dst, parts["base_map"], parts["total_map"]
    try:
        return BundleMap(src, dst, parts["base_map"], parts["total_map"])
    except DirichletError as exc:
        raise InputError(str(exc), exc.invariant, source, "total_map") from exc


def load_map(path: str | Path, check: bool = True):
    return map_from_json(read_json(path), str(path), check)


def map_to_json(m: BundleMap) -> dict:
    return {"src": bundle_to_json(m.src), "dst": bundle_to_json(m.dst),
            "base_map": list(m.base_map.table), "total_map": list(m.total_map.table)}
