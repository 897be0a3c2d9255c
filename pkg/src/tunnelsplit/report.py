"""Serialization of run documents: canonical JSON, CSV and plain tables.

Floats are always written as ``%.12e``; splittings span many decades and
fixed-point output would flatten them.  Keys are sorted, so emitting the
same data twice, or re-emitting a parsed document, gives identical bytes.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from typing import Any, Iterable, Sequence

import numpy as np


def fmt_float(x: float) -> str:
    return "%.12e" % x


def plain(obj: Any) -> Any:
    """Dataclasses, tuples and numpy scalars to JSON-ready builtins."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _encode(obj: Any, level: int) -> str:
    pad = "  " * (level + 1)
    end = "  " * level
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(obj[k], level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + _encode(v, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc: Any) -> str:
    return _encode(plain(doc), 0) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt_float(value) if math.isfinite(value) else ""
    return str(value)


def to_csv(columns: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(plain(row.get(c))) for c in columns])
    return buf.getvalue()


def flatten(doc: dict, prefix: str = "") -> list[tuple[str, Any]]:
    out = []
    for key in sorted(doc):
        value = doc[key]
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.extend(flatten(value, name + "."))
        else:
            out.append((name, value))
    return out


def _show(value: Any) -> str:
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, list):
        return "; ".join(_show(v) for v in value)
    return str(value)


def to_table(doc: dict) -> str:
    rows = flatten(plain(doc))
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {_show(v)}\n" for k, v in rows)


def rows_table(columns: Sequence[str], rows: Iterable[dict]) -> str:
    cells = [list(columns)] + [[_cell(plain(r.get(c))) for c in columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in cells)
