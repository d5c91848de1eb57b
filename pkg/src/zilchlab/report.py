"""Deterministic report assembly.

Reports are plain JSON with sorted keys and no timestamps, so the same
configuration and seed always produce byte-identical output.  Every
run block embeds the metric convention it was computed under, and
every identity entry carries its stable anchor slug (the identity
name used across the suite and the docs).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from .minkowski import MetricConvention
from .noether import IdentityReport


def jsonable(obj):
    """Recursively convert suite objects to JSON-serializable data."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        items = sorted(obj, key=str) if isinstance(obj, set) else obj
        return [jsonable(v) for v in items]
    if hasattr(obj, "value") and obj.__class__.__module__ != "builtins":
        # enums carry their stable string value
        value = obj.value
        if isinstance(value, str):
            return value
    return str(obj)


def convention_block(conv: MetricConvention) -> dict:
    return {
        "signature": conv.signature,
        "epsilon0123": conv.epsilon0123,
        "metric_diagonal": list(conv.g),
        "coordinates": ["t", "x", "y", "z"],
    }


def identity_entry(rep: IdentityReport, out_dir: Path | None = None) -> dict:
    """One identity row; a nonzero residual writes its witness
    polynomial next to the report and records the relative path."""
    entry = {
        "anchor": rep.identity_name,
        "assignments_checked": rep.assignments_checked,
        "residual_zero": rep.residual_zero,
    }
    if rep.details:
        entry["details"] = jsonable(rep.details)
    if rep.witness is not None:
        assignment, polynomial = rep.witness
        entry["witness"] = {"assignment": jsonable(assignment)}
        if out_dir is not None:
            slug = rep.identity_name.replace("/", "-")
            path = Path(out_dir) / f"witness-{slug}.txt"
            path.write_text(
                f"identity: {rep.identity_name}\n"
                f"assignment: {assignment}\n"
                f"residual polynomial:\n{polynomial}\n"
            )
            entry["witness"]["polynomial_path"] = path.name
        else:
            entry["witness"]["polynomial"] = str(polynomial)
    return entry


def render_report(payload: dict) -> str:
    """Canonical JSON text: sorted keys, stable float formatting."""
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def write_report(payload: dict, out_dir, name: str = "report.json") -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(render_report(payload))
    return path
