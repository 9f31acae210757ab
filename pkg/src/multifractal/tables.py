"""Bit-stable CSV/JSON emission for result tables.

Floats are printed with 17 significant digits so output round-trips exactly;
CSV uses LF endings and a header row; JSON preserves the key order of the
first row. Identical inputs produce byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import IoError

_FLOAT_FMT = "%.17g"


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isfinite(v):
            return _FLOAT_FMT % v
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return str(value)


def _json_fragment(value: Any) -> str:
    if isinstance(value, Mapping):
        items = (f"{json.dumps(str(k))}: {_json_fragment(v)}"
                 for k, v in value.items())
        return "{" + ", ".join(items) + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_fragment(v) for v in value) + "]"
    if value is None:
        return "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)) and not math.isfinite(float(value)):
        return json.dumps(float(value))  # Infinity / NaN, as the json module does
    return format_value(value)


def _write(sink, text: str) -> None:
    try:
        if sink is None:
            sys.stdout.write(text)
        elif isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
            with open(sink, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sink.write(text)
    except OSError as exc:
        raise IoError(str(exc)) from exc


def render_csv(rows: Sequence[Mapping[str, Any]],
               header: Sequence[str] | None = None) -> str:
    if header is None:
        header = list(rows[0].keys()) if rows else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(row[k]) for k in header])
    return buf.getvalue()


def render_json(rows: Sequence[Mapping[str, Any]]) -> str:
    return "[" + ", ".join(_json_fragment(r) for r in rows) + "]\n"


def emit_table(rows: Sequence[Mapping[str, Any]], format: str = "csv",
               sink=None, header: Sequence[str] | None = None) -> None:
    """Write homogeneous rows to sink (path, file object, or stdout)."""
    if format == "csv":
        _write(sink, render_csv(rows, header))
    elif format == "json":
        _write(sink, render_json(rows))
    else:
        raise IoError(f"unknown table format {format!r}")


def emit_object(obj: Mapping[str, Any], sink=None) -> None:
    """Write a single JSON object (used for construction and witness specs)."""
    _write(sink, _json_fragment(obj) + "\n")
