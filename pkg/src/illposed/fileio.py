"""CSV and JSON serialization with byte-stable formatting.

All floats are written with 17 significant digits so values round-trip
exactly and identical invocations produce identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import ParseError
from .linop import DenseOperator
from .robustness import EmpiricalDistribution


def fmt_float(x: float) -> str:
    """Float as a decimal literal with 17 significant digits."""
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(float(x), ".17g")


def _parse_rows(path: str, n_fields: int | None = None) -> list[list[float]]:
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped:
                continue
            fields = stripped.split(",")
            if n_fields is not None and len(fields) != n_fields:
                raise ParseError(
                    f"{path}:{lineno}: expected {n_fields} fields, got {len(fields)}"
                )
            try:
                rows.append([float(v) for v in fields])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if rows and len(rows[-1]) != len(rows[0]):
                raise ParseError(
                    f"{path}:{lineno}: row has {len(rows[-1])} fields, "
                    f"first row has {len(rows[0])}"
                )
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return rows


def read_matrix_csv(path: str) -> DenseOperator:
    """Read a headerless CSV of decimal reals; dimensions are inferred."""
    return DenseOperator(np.array(_parse_rows(path)))


def read_vector_csv(path: str) -> np.ndarray:
    """Read a one-column CSV as a vector."""
    rows = _parse_rows(path, n_fields=1)
    return np.array([r[0] for r in rows])


def read_distribution_csv(path: str) -> EmpiricalDistribution:
    """Read (location, weight) rows into an EmpiricalDistribution."""
    rows = _parse_rows(path, n_fields=2)
    return EmpiricalDistribution(
        np.array([r[0] for r in rows]), np.array([r[1] for r in rows])
    )


def matrix_to_csv(matrix: np.ndarray) -> str:
    arr = np.atleast_2d(np.asarray(matrix, dtype=float))
    return "\n".join(",".join(fmt_float(v) for v in row) for row in arr) + "\n"


def vector_to_csv(vec: np.ndarray) -> str:
    return "\n".join(fmt_float(v) for v in np.asarray(vec, dtype=float)) + "\n"


def table_to_csv(header: list[str], columns: list[np.ndarray]) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(fmt_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(float(v))
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json_value(item) for item in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def json_flat(d: dict) -> str:
    """Flat JSON object with keys in insertion order."""
    body = ",\n".join(f"  {json.dumps(k)}: {_json_value(v)}" for k, v in d.items())
    return "{\n" + body + "\n}\n"
