"""Deterministic CSV / JSON / columnar text output (floats always written with 17 significant digits)."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .io import atomic_write


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _encode(obj, out: list, depth: int, indent: int):
    pad = "\n" + " " * (indent * (depth + 1)) if indent else ""
    close = "\n" + " " * (indent * depth) if indent else ""
    sep = ": " if indent else ":"
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        text = format_float(obj)
        # JSON has no inf/nan literals; keep them readable as strings
        out.append(text if math.isfinite(obj) else f'"{text}"')
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            out.append(("," if i else "") + pad + json.dumps(str(key), ensure_ascii=False) + sep)
            _encode(obj[key], out, depth + 1, indent)
        out.append(close + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[")
        for i, item in enumerate(obj):
            out.append(("," if i else "") + pad)
            _encode(item, out, depth + 1, indent)
        out.append(close + "]")
    else:
        raise TypeError(f"cannot encode {type(obj).__name__}")


def to_json(obj, indent: int = 2) -> str:
    """JSON with sorted keys and 17-significant-digit floats; ``indent=0`` gives one line."""
    parts: list[str] = []
    _encode(obj, parts, 0, indent)
    return "".join(parts) + "\n"


def _cell(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return str(value)


def to_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def to_columns(rows: list[dict], columns: list[str]) -> str:
    """Whitespace-separated columns with a ``#`` header, readable by gnuplot."""
    lines = ["# " + " ".join(columns)]
    for row in rows:
        cells = []
        for c in columns:
            text = _cell(row.get(c)) or "-"
            cells.append(text.replace(" ", "_"))
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def write_text(path, text: str):
    atomic_write(path, text.encode("utf-8"))
