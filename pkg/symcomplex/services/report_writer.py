"""
CSV and JSON rendering of command results.

JSON numbers carry ``json_significant_digits`` significant digits and CSV
cells ``csv_significant_digits``; key order follows the report models so
output bytes are stable for fixed inputs.
"""
import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel

from symcomplex.config import settings
from symcomplex.schemas.reports import ComplexityReport

CSV = "csv"
JSON = "json"
FORMATS = (CSV, JSON)


def round_significant(value: float, digits: int) -> float:
    if not math.isfinite(value) or value == 0:
        return value
    return float(f"{value:.{digits}g}")


def to_jsonable(obj: Any, digits: Optional[int] = None) -> Any:
    """Plain JSON types with floats rounded to ``digits`` significant digits."""
    digits = settings.json_significant_digits if digits is None else digits
    if isinstance(obj, BaseModel):
        return to_jsonable(obj.model_dump(by_alias=True), digits)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, digits) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist(), digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            return None
        return round_significant(value, digits)
    return obj


def render_json(payload: Any, digits: Optional[int] = None) -> str:
    return json.dumps(to_jsonable(payload, digits), indent=2) + "\n"


def _cell(value: Any, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{digits}g}"
    return str(value)


def render_csv(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None,
               comments: Sequence[str] = (), digits: Optional[int] = None) -> str:
    """Rows of dicts as CSV, preceded by ``# comment`` lines."""
    digits = settings.csv_significant_digits if digits is None else digits
    if columns is None:
        columns = list(rows[0].keys()) if rows else []
    buffer = io.StringIO()
    for comment in comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c), digits) for c in columns])
    return buffer.getvalue()


def complexity_csv(reports: Sequence[ComplexityReport], digits: Optional[int] = None) -> str:
    """Wide table: one row per n, one column per measure; metadata as comments."""
    if not reports:
        return render_csv([], ["n"], digits=digits)
    n_values = reports[0].n_values
    rows = [
        {"n": n, **{r.measure: r.values[i] for r in reports}}
        for i, n in enumerate(n_values)
    ]
    comments = []
    for r in reports:
        meta = ", ".join(f"{k}={v}" for k, v in r.metadata.items() if k != "partial")
        comments.append(f"{r.measure}: {meta}")
        if "partial" in r.metadata:
            comments.append(f"{r.measure}: partial lower bounds {r.metadata['partial']}")
    return render_csv(rows, ["n"] + [r.measure for r in reports], comments, digits)


def models_csv(models: Sequence[BaseModel], digits: Optional[int] = None) -> str:
    """Flat CSV of report models; nested fields are JSON-encoded."""
    rows = []
    for model in models:
        row = {}
        for key, value in model.model_dump(by_alias=True).items():
            if isinstance(value, (dict, list)):
                value = json.dumps(to_jsonable(value, digits or settings.csv_significant_digits), sort_keys=True)
            row[key] = value
        rows.append(row)
    return render_csv(rows, digits=digits)


def write_output(text: str, out: Optional[str] = None) -> None:
    """Write to ``out`` or stdout."""
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(text)} characters to {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
