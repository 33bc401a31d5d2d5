"""Plain-text persistence: snapshots, diagnostics and sweep ledgers, JSON summaries.

Floats are written with 17 significant digits so files round-trip bit for bit.
"""

from __future__ import annotations

import json
import math
import re
from pathlib import Path

import numpy as np

from .dynamics import State
from .errors import ConfigurationError
from .spectral import Field, make_grid
from .trajectory import DIAGNOSTIC_COLUMNS, RunReport

__all__ = [
    "fmt",
    "write_snapshot",
    "read_snapshot",
    "write_diagnostics",
    "write_sweep",
    "write_json",
    "jsonable",
]

_HEADER = re.compile(r"#\s*L=(\S+)\s+N=(\d+)\s+t=(\S+)")


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return "%.17g" % float(x)


def write_snapshot(path, obj, t: float | None = None) -> None:
    """CSV with header ``# L=<float> N=<int> t=<float>``, then ``x,u,v`` rows
    for a State or ``x,u`` rows for a single Field."""
    if isinstance(obj, State):
        g, t = obj.grid, obj.t if t is None else t
        cols, names = (obj.u.samples, obj.v.samples), "x,u,v"
    else:
        g, t = obj.grid, 0.0 if t is None else t
        cols, names = (obj.samples,), "x,u"
    lines = [f"# L={fmt(g.L)} N={g.N} t={fmt(t)}", names]
    for row in zip(g.x, *cols):
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_snapshot(path):
    """State for ``x,u,v`` files, ``(Field, t)`` for ``x,u`` files."""
    text = Path(path).read_text().splitlines()
    if not text:
        raise ConfigurationError(f"snapshot {path} is empty", key="snapshot")
    m = _HEADER.match(text[0])
    if not m:
        raise ConfigurationError(f"snapshot {path}: bad header {text[0]!r}", key="snapshot", line=1)
    L, N, t = float(m.group(1)), int(m.group(2)), float(m.group(3))
    g = make_grid(L, N)
    rows = [ln for ln in text[1:] if ln.strip() and not ln.startswith("x,")]
    if len(rows) != N:
        raise ConfigurationError(f"snapshot {path}: expected {N} rows, found {len(rows)}", key="snapshot")
    try:
        data = np.array([[float(c) for c in r.split(",")] for r in rows])
    except ValueError:
        raise ConfigurationError(f"snapshot {path}: malformed rows", key="snapshot") from None
    if data.ndim != 2 or data.shape[1] not in (2, 3):
        raise ConfigurationError(f"snapshot {path}: expected 2 or 3 columns", key="snapshot")
    if data.shape[1] == 2:
        return Field(g, data[:, 1]), t
    return State(Field(g, data[:, 1]), Field(g, data[:, 2]), t)


def write_diagnostics(path, rep: RunReport) -> None:
    lines = [",".join(DIAGNOSTIC_COLUMNS)]
    for row in rep.rows:
        lines.append(",".join(fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n")


def write_sweep(path, results) -> None:
    lines = ["epsilon,p,s,T_esc,product,cap_hit"]
    for r in results:
        lines.append(",".join(fmt(v) for v in (r.epsilon, r.p, r.s, r.T_esc, r.product, r.cap_hit)))
    Path(path).write_text("\n".join(lines) + "\n")


def jsonable(obj):
    """Replace non-finite floats by strings and numpy scalars by Python ones."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(jsonable(obj), indent=2, sort_keys=True) + "\n")
