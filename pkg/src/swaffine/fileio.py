"""JSON system files, run reports and CSV traces."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import InputError
from .model import SwitchedSystem

SCHEMA = 1


def bundled_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("swaffine.data").iterdir()
                  if p.name.endswith(".json"))


def _matrix(value, path, rows=None, cols=None):
    if not isinstance(value, list):
        raise InputError(f"{path}: expected a list of rows")
    if rows is not None and len(value) != rows:
        raise InputError(f"{path}: expected {rows} rows, got {len(value)}")
    out = []
    for i, row in enumerate(value):
        out.append(_vector(row, f"{path}[{i}]", cols))
        cols = len(out[-1])
    return out


def _vector(value, path, size=None):
    if not isinstance(value, list):
        raise InputError(f"{path}: expected a list of numbers")
    if size is not None and len(value) != size:
        raise InputError(f"{path}: expected {size} numbers, got {len(value)}")
    for j, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise InputError(f"{path}[{j}]: expected a number, got {v!r}")
    return [float(v) for v in value]


def parse_system(doc) -> SwitchedSystem:
    """Build a system from a decoded JSON document, naming the offending path on error."""
    if not isinstance(doc, dict):
        raise InputError("$: expected an object with keys A, b[, C, name]")
    for key in ("A", "b"):
        if key not in doc:
            raise InputError(f"$.{key}: missing")
    A = doc["A"]
    if not isinstance(A, list) or not A:
        raise InputError("$.A: expected a non-empty list of matrices")
    n = len(A[0]) if isinstance(A[0], list) else 0
    if n == 0:
        raise InputError("$.A[0]: expected a non-empty square matrix")
    A = [_matrix(Ai, f"$.A[{i}]", n, n) for i, Ai in enumerate(A)]
    b = doc["b"]
    if not isinstance(b, list):
        raise InputError("$.b: expected a list of vectors")
    if len(b) != len(A):
        raise InputError(f"$.b: expected {len(A)} vectors, got {len(b)}")
    b = [_vector(bi, f"$.b[{i}]", n) for i, bi in enumerate(b)]
    C = doc.get("C")
    if C is not None:
        C = _matrix(C, "$.C", None, n) if C else None
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InputError("$.name: expected a string")
    return SwitchedSystem(np.array(A), np.array(b), None if C is None else np.array(C), name)


def system_to_dict(sys: SwitchedSystem) -> dict:
    d = {"name": sys.name, "A": sys.A.tolist(), "b": sys.b.tolist()}
    if sys.n_z:
        d["C"] = sys.C.tolist()
    return d


def load_system(source) -> SwitchedSystem:
    """Load a system from a path, or from a bundled fixture name such as ``example3``."""
    path = Path(source)
    if path.is_file():
        text = path.read_text()
    elif str(source) in bundled_names():
        text = resources.files("swaffine.data").joinpath(f"{source}.json").read_text()
    else:
        raise InputError(f"{source}: no such file or bundled system")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: $: invalid JSON ({exc.msg} at line {exc.lineno}, "
                         f"column {exc.colno})") from None
    try:
        return parse_system(doc)
    except InputError as exc:
        raise InputError(f"{source}: {exc}") from None


def to_jsonable(obj):
    """Convert numpy containers to plain lists; floats keep full precision."""
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps_report(report: dict) -> str:
    return json.dumps(to_jsonable(report), indent=2, allow_nan=False) + "\n"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return v
