"""JSON input documents, report serialization and closed-form annotation of radii."""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import DegenerateError, SchemaError, ShapeError
from .geometry import SimplexN


DIM_KEY, LABEL_KEY = '"dim"', '"label"'


def _line_of(text: str, needle: str) -> int:
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return 1


def parse_simplex(doc) -> tuple[SimplexN, str | None]:
    """Validate a ``{"dim", "vertices", "label"?}`` document; returns the simplex and its label."""
    text = doc.decode("utf-8") if isinstance(doc, (bytes, bytearray)) else str(doc)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno}, column {e.colno}: invalid JSON ({e.msg})") from None
    if not isinstance(data, dict):
        raise SchemaError("line 1: top-level JSON value must be an object")
    for key in ("dim", "vertices"):
        if key not in data:
            raise SchemaError(f"line 1: missing required field {key!r}")
    dim = data["dim"]
    vline = _line_of(text, '"vertices"')
    if isinstance(dim, bool) or not isinstance(dim, int):
        raise SchemaError(f"line {_line_of(text, DIM_KEY)}: field 'dim' must be an integer")
    label = data.get("label")
    if label is not None and not isinstance(label, str):
        raise SchemaError(f"line {_line_of(text, LABEL_KEY)}: field 'label' must be a string")
    verts = data["vertices"]
    if not isinstance(verts, list) or not all(isinstance(row, list) for row in verts):
        raise SchemaError(f"line {vline}: field 'vertices' must be a list of coordinate lists")
    for i, row in enumerate(verts):
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SchemaError(f"line {vline}: vertex {i} has a non-numeric coordinate {x!r}")
    if len(verts) != dim + 1:
        raise ShapeError(f"line {vline}: a simplex with dim {dim} needs {dim + 1} vertices, got {len(verts)}")
    for i, row in enumerate(verts):
        if len(row) != dim:
            raise ShapeError(f"line {vline}: vertex {i} has {len(row)} coordinates, expected {dim}")
    arr = np.array(verts, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ShapeError(f"line {vline}: coordinates must be finite")
    try:
        s = SimplexN(arr)
    except DegenerateError as e:
        raise type(e)(f"line {vline}: {e}") from None
    return s, label


def write_simplex(s: SimplexN, label: str | None = None) -> str:
    doc: dict[str, Any] = {"dim": s.dim, "vertices": np.asarray(s.vertices).tolist()}
    if label is not None:
        doc["label"] = label
    return json.dumps(doc, indent=2)


# -- closed forms -----------------------------------------------------------------

def _squarefree_split(k: int) -> tuple[int, int]:
    """``k = a^2 b`` with ``b`` squarefree."""
    a, b, f = 1, k, 2
    while f * f <= b:
        while b % (f * f) == 0:
            b //= f * f
            a *= f
        f += 1
    return a, b


def closed_form(r: float, max_den: int = 1000, tol: float = 1e-10) -> str | None:
    """Annotation ``a√b/c`` when ``r^2`` is a small-denominator rational; display only."""
    if not (r > 0 and math.isfinite(r)):
        return None
    q = Fraction(r * r).limit_denominator(max_den)
    if q <= 0:
        return None
    p_, q_ = q.numerator, q.denominator
    a, b = _squarefree_split(p_ * q_)
    g = math.gcd(a, q_)
    a, c = a // g, q_ // g
    value = a * math.sqrt(b) / c
    if abs(value - r) > tol or a > 10_000 or b > 10_000:
        return None
    num = (str(a) if a != 1 or b == 1 else "") + (f"√{b}" if b != 1 else "")
    return num if c == 1 else f"{num}/{c}"


# -- reports ------------------------------------------------------------------------

def to_jsonable(x):
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def dumps_report(report: dict) -> str:
    """JSON text; floats use the shortest repr that round-trips (at most 17 significant digits)."""
    return json.dumps(to_jsonable(report), indent=2, ensure_ascii=False) + "\n"


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, list) and all(not isinstance(v, (dict, list)) for v in x):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return str(x)


def render_text(report: dict) -> str:
    """Plain-text rendering of the same structured report."""
    data = to_jsonable(report)
    lines = []
    if "summary" in data:
        lines.append(str(data["summary"]))

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if k == "summary" and indent == 0:
                    continue
                if isinstance(v, (dict, list)) and not (isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v)):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_fmt(v)}")
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                if isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v):
                    lines.append(f"{pad}- {_fmt(v)}")
                elif isinstance(v, (dict, list)):
                    lines.append(f"{pad}- [{i}]")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_fmt(v)}")

    walk(data, 0)
    return "\n".join(lines) + "\n"
