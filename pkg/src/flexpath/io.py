"""Deterministic CSV/JSON writers.

Floats are printed with 17 significant digits so values round-trip exactly
and repeated runs produce byte-identical files.  Non-finite floats become
``null`` in JSON and ``nan``/``inf`` in CSV.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np


def fmt(v):
    # adding 0.0 folds -0.0 into 0.0
    return format(float(v) + 0.0, ".17g")


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    return obj


def _dump(obj, indent, level):
    obj = _plain(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, indent, level + 1)}"
                 for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(_plain(v), (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_dump(v, indent, level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj, indent=2):
    """Serialize with sorted keys and fixed float formatting."""
    return _dump(obj, indent, 0) + "\n"


def write_json(path, obj):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_json(obj))
    return path


def csv_text(header, columns):
    """Comma-separated text from equal-length columns; ints stay ints."""
    cols = [np.asarray(c) for c in columns]
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("CSV columns differ in length")
    lines = [",".join(header)]
    conv = [(lambda v: str(int(v))) if np.issubdtype(c.dtype, np.integer) else fmt for c in cols]
    for i in range(n):
        lines.append(",".join(f(c[i]) for f, c in zip(conv, cols)))
    return "\n".join(lines) + "\n"


def write_csv(path, header, columns):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text(header, columns))
    return path


def read_csv(path):
    """Header and float array of a file written by :func:`write_csv`."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def simulation_columns(sim):
    """Long-format ``t, x, w, sigma`` columns, time-major."""
    nt, nx = sim.w.shape
    t = np.repeat(np.asarray(sim.times, dtype=float), nx)
    x = np.tile(np.asarray(sim.x, dtype=float), nt)
    return ["t", "x", "w", "sigma"], [t, x, sim.w.ravel(), sim.sigma.ravel()]
