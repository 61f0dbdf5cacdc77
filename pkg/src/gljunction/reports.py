"""JSON / CSV / two-column writers with round-trippable float formatting."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    return format(float(x), ".17g")


def _json_value(v, depth: int) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "null" if not math.isfinite(v) else fmt(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        if depth > 1:
            raise ValueError("reports are flat: at most one level of nesting")
        return "[" + ", ".join(_json_value(x, depth + 1) for x in v) + "]"
    if isinstance(v, dict):
        if depth > 1:
            raise ValueError("reports are flat: at most one level of nesting")
        return _json_object(v, depth + 1, indent="")
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _json_object(d: dict, depth: int, indent: str = "  ") -> str:
    sep = ",\n" if indent else ", "
    items = [f"{indent}{_json_value(str(k), depth)}: {_json_value(v, depth)}" for k, v in d.items()]
    if indent:
        return "{\n" + sep.join(items) + "\n}\n"
    return "{" + sep.join(items) + "}"


def to_json(d: dict) -> str:
    return _json_object(d, 0)


def write_json(path, d: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(d))
    return path


def write_csv(path, header, columns) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [np.asarray(c) for c in columns]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([_cell(x) for x in row])
    return path


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return fmt(x)
    return str(x)


def read_csv(path) -> dict:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        return {}
    out = {}
    for key in rows[0]:
        vals = [r[key] for r in rows]
        try:
            out[key] = np.array([float(v) for v in vals])
        except ValueError:
            out[key] = vals
    return out


def write_columns(path, x, y) -> Path:
    """Whitespace-separated two-column file for gnuplot."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as fh:
        for a, b in zip(x, y):
            fh.write(f"{fmt(a)} {fmt(b)}\n")
    return path


def field_csv(path, problem, u) -> Path:
    if problem.kind == "radial":
        return write_csv(path, ["r", "u"], [problem.r, u])
    return write_csv(path, ["x", "y", "u"], [problem.x, problem.y, u])
