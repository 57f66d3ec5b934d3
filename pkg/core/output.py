# core/output.py
"""
Record output for the command line.

Responsibilities:
- Convert results (numpy scalars/arrays, complex numbers, tuples, dataclasses)
  into plain JSON-safe values.
- Write one document per invocation as JSON or as CSV rows.
- Validate JSON documents against schemas/output.schema.json.

Key classes / functions:
- make_json_safe(obj)
- OutputWriter(fmt, stream)
    - emit(document)
    - emit_series(rows)   # plotdata (x, y, series) CSV
- validate_document(document)
"""

import csv
import dataclasses
import json
import math
import sys
from functools import lru_cache
from typing import Any, Dict, Iterable, List, TextIO

import jsonschema
import numpy as np

import config
from core.errors import DomainError, SchemaViolation
from core.utils import get_logger

logger = get_logger("core.output")


def make_json_safe(obj: Any) -> Any:
    """Nested conversion to dict/list/str/int/float/bool/None; complex -> {"re", "im"}."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return make_json_safe(obj.to_dict() if hasattr(obj, "to_dict") else dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): make_json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [make_json_safe(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [make_json_safe(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _float(obj.real), "im": _float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    return obj


def _float(x) -> Any:
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


# ----------------------
# CSV flattening
# ----------------------
def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{config.OUTPUT['csv_digits']}g")
    if isinstance(value, list):
        return ";".join(_csv_cell(v) for v in value)
    return str(value)


def flatten_row(row: Dict[str, Any]) -> Dict[str, Any]:
    """Split {"re", "im"} values into <name>_re / <name>_im columns."""
    out = {}
    for key, value in row.items():
        if isinstance(value, dict) and set(value) == {"re", "im"}:
            out[f"{key}_re"] = value["re"]
            out[f"{key}_im"] = value["im"]
        elif isinstance(value, dict):
            out[key] = json.dumps(value, sort_keys=True)
        else:
            out[key] = value
    return out


def _columns(rows: List[Dict[str, Any]]) -> List[str]:
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


# ----------------------
# Schema
# ----------------------
@lru_cache(maxsize=1)
def _schema() -> Dict[str, Any]:
    with open(config.OUTPUT["schema"], encoding="utf-8") as f:
        return json.load(f)


def validate_document(document: Dict[str, Any]) -> None:
    try:
        jsonschema.validate(instance=document, schema=_schema())
    except jsonschema.ValidationError as exc:
        raise SchemaViolation(f"output document violates schema: {exc.message}") from exc


class OutputWriter:
    def __init__(self, fmt: str = None, stream: TextIO = None):
        self.fmt = fmt or config.OUTPUT["format"]
        if self.fmt not in ("json", "csv"):
            raise DomainError(f"unknown output format {self.fmt!r}")
        self.stream = stream or sys.stdout

    def emit(self, document: Dict[str, Any]) -> Dict[str, Any]:
        """
        Write one document {"command", "config", "rows"?, "result"?, "checks"?}.

        CSV writes the rows (or checks, or the single result record) as a table.
        Returns the JSON-safe document.
        """
        safe = make_json_safe(document)
        validate_document(safe)
        if self.fmt == "json":
            self.stream.write(json.dumps(safe, sort_keys=True) + "\n")
        else:
            if "rows" in safe:
                table = safe["rows"]
            elif "checks" in safe:
                table = safe["checks"]
            else:
                table = [safe.get("result", {})]
            # empty tables still get their header from the declared columns
            self._write_csv([flatten_row(r) for r in table], columns=None if table else safe.get("columns"))
        logger.debug("Emitted %s document for %s", self.fmt, safe.get("command"))
        return safe

    def emit_series(self, rows: Iterable[Dict[str, Any]]) -> None:
        """Plot data: (x, y, series) rows as CSV whatever the output format."""
        self._write_csv([flatten_row(make_json_safe(r)) for r in rows], columns=["x", "y", "series"])

    def _write_csv(self, rows: List[Dict[str, Any]], columns: List[str] = None) -> None:
        columns = columns or _columns(rows)
        writer = csv.writer(self.stream, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_csv_cell(row.get(c)) for c in columns])
