"""CSV and JSON output with a fixed, reproducible format.

CSV: comma separated, header row, LF line endings, floats with 17 significant
digits, empty field for missing values. JSON: UTF-8, ``null`` for missing and
non-finite values.
"""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def to_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, ensure_ascii=False) + "\n"
