"""CSV matrices and JSON reports.

Matrix files are plain comma-separated decimals with an optional header row.
Reals are written with 17 significant digits, which round-trips IEEE doubles
exactly. JSON reports share one envelope::

    {"schema": ..., "tool": ..., "version": ..., "command": ..., "seed": ...,
     "config": {...}, "result": {...}, "meta": {"created_at": ...}}

``meta.created_at`` is the only field that differs between identical runs.
"""
import csv
import dataclasses
import datetime as _dt
import enum
import json
import math
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, IoError, ParseError

SCHEMA_VERSION = "dantzig.report/1"
TIMESTAMP_KEY = "created_at"

__all__ = ["read_matrix_csv", "write_matrix_csv", "read_vector_csv", "write_vector_csv",
           "format_real", "dumps_report", "write_report_json", "read_report_json",
           "make_report", "write_rows_csv", "SCHEMA_VERSION", "TIMESTAMP_KEY"]


def format_real(x):
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite value cannot be written")
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _parse_field(text):
    try:
        return float(text)
    except ValueError:
        return None


def read_matrix_csv(path):
    """Parse a MatrixFile; a first row that does not parse as numbers is a header."""
    path = Path(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh)]
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    while rows and not any(f.strip() for f in rows[-1]):
        rows.pop()
    if not rows:
        raise ParseError(f"{path}: no data", row=1)
    start = 0
    if any(_parse_field(f.strip()) is None for f in rows[0]):
        start = 1
    data = []
    width = None
    for i in range(start, len(rows)):
        line = i + 1
        fields = rows[i]
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(f"{path}: row {line} has {len(fields)} fields, expected {width}",
                             row=line)
        vals = []
        for j, f in enumerate(fields):
            v = _parse_field(f.strip())
            if v is None or not math.isfinite(v):
                raise ParseError(f"{path}: bad value {f!r} at row {line}, column {j + 1}",
                                 row=line, col=j + 1)
            vals.append(v)
        data.append(vals)
    if not data:
        raise ParseError(f"{path}: header only, no data rows", row=len(rows))
    return np.array(data, dtype=float)


def write_matrix_csv(M, path, header=None):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if header is not None and len(header) != M.shape[1]:
        raise DimensionMismatch("header length must match column count")
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            if header is not None:
                fh.write(",".join(header) + "\n")
            for row in M:
                fh.write(",".join(format_real(v) for v in row) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_vector_csv(path):
    """Read a single-column or single-row CSV as a 1-D array."""
    M = read_matrix_csv(path)
    if M.shape[1] == 1:
        return M[:, 0]
    if M.shape[0] == 1:
        return M[0]
    raise ParseError(f"{path}: expected one row or one column, got {M.shape}")


def write_vector_csv(v, path, name=None):
    write_matrix_csv(np.asarray(v, dtype=float).reshape(-1, 1), path,
                     header=[name] if name else None)


def write_rows_csv(rows, path, columns):
    """Write a list of dicts as CSV with the given column order."""
    def cell(v):
        if v is None:
            return ""
        if isinstance(v, (bool, np.bool_)):
            return "true" if v else "false"
        if isinstance(v, (int, np.integer)):
            return str(int(v))
        if isinstance(v, (float, np.floating)):
            return format_real(v) if math.isfinite(v) else ""
        return str(v)
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(",".join(columns) + "\n")
            for r in rows:
                fh.write(",".join(cell(r.get(c)) for c in columns) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Path):
        return str(obj)
    return obj


def _emit(obj, out, indent, level):
    obj = _plain(obj)
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_real(obj) if math.isfinite(obj) else "null")
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        items = list(obj.items())
        for k, (key, val) in enumerate(items):
            out.append(pad + json.dumps(str(key), ensure_ascii=False) + ": ")
            _emit(val, out, indent, level + 1)
            out.append(",\n" if k < len(items) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[")
        for k, val in enumerate(obj):
            _emit(val, out, indent, level + 1)
            if k < len(obj) - 1:
                out.append(", ")
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(report, indent=2):
    """Serialize with insertion-ordered keys and 17-significant-digit reals.

    Non-finite reals become ``null``.
    """
    out = []
    _emit(report, out, indent, 0)
    return "".join(out) + "\n"


def make_report(command, result, config=None, seed=None):
    from . import __version__
    return {
        "schema": SCHEMA_VERSION,
        "tool": "dantzig",
        "version": __version__,
        "command": command,
        "seed": seed,
        "config": config or {},
        "result": result,
        "meta": {TIMESTAMP_KEY: _dt.datetime.now(_dt.timezone.utc).isoformat()},
    }


def write_report_json(report, path):
    text = dumps_report(report)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_report_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
