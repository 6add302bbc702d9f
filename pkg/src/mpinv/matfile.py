"""Reading and writing complex matrices as CSV or JSON files.

CSV cells use the literal grammar ``FLOAT``, ``FLOAT+FLOATi``, ``FLOAT-FLOATi``,
``FLOATi``, ``i`` and ``-i``, with optional whitespace around the parts.
JSON files hold ``{"rows": m, "cols": n, "entries": [[re, im], ...]}`` in
row-major order.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

import numpy as np

from .matrix import ComplexMatrix, as_array

__all__ = ["ParseError", "ShapeError", "parse_complex", "format_complex", "read_matrix", "write_matrix", "guess_format"]


class ParseError(ValueError):
    """A cell or document could not be parsed; ``row``/``col`` are 1-based when known."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        where = f" at row {row}, column {col}" if row is not None and col is not None else (
            f" at row {row}" if row is not None else ""
        )
        super().__init__(message + where)
        self.row = row
        self.col = col


class ShapeError(ValueError):
    """Rows of a matrix file have different lengths, or the declared shape is wrong."""

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


_FLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_CELL = re.compile(
    rf"""^\s*
    (?:
        (?P<re>[+-]?\s*{_FLOAT})
        (?:\s*(?P<sign>[+-])\s*(?P<im>{_FLOAT})?\s*i)?
      |
        (?P<isign>[+-]?)\s*(?P<imonly>{_FLOAT})?\s*i
    )
    \s*$""",
    re.VERBOSE,
)


def parse_complex(text: str) -> complex:
    """Parse one cell literal such as ``2``, ``-1.5e3``, ``3-4i``, ``2.5i`` or ``-i``."""
    match = _CELL.match(text.replace("−", "-"))
    if match is None:
        raise ValueError(f"not a complex literal: {text.strip()!r}")
    if match.group("re") is not None:
        real = float(match.group("re").replace(" ", ""))
        if match.group("sign") is None:
            return complex(real, 0.0)
        imag = float(match.group("im")) if match.group("im") else 1.0
        return complex(real, -imag if match.group("sign") == "-" else imag)
    imag = float(match.group("imonly")) if match.group("imonly") else 1.0
    return complex(0.0, -imag if match.group("isign") == "-" else imag)


def format_complex(z: complex, precision: int = 17) -> str:
    re_part, im_part = float(z.real), float(z.imag)
    if im_part == 0.0:
        return f"{re_part:.{precision}g}"
    imag = f"{abs(im_part):.{precision}g}i"
    if re_part == 0.0:
        return ("-" if im_part < 0 else "") + imag
    return f"{re_part:.{precision}g}{'-' if im_part < 0 else '+'}{imag}"


def guess_format(path: str | Path) -> str:
    return "json" if str(path).lower().endswith(".json") else "csv"


def _read_csv(text: str) -> np.ndarray:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    rows: list[list[complex]] = []
    for i, line in enumerate(lines, start=1):
        row = []
        for j, cell in enumerate(line.split(","), start=1):
            try:
                row.append(parse_complex(cell))
            except ValueError as exc:
                raise ParseError(str(exc), i, j) from None
        if rows and len(row) != len(rows[0]):
            raise ShapeError(f"row {i} has {len(row)} entries, expected {len(rows[0])}", row=i)
        rows.append(row)
    return np.array(rows, dtype=np.complex128)


def _read_json(text: str) -> np.ndarray:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or not {"rows", "cols", "entries"} <= doc.keys():
        raise ParseError('JSON matrix needs "rows", "cols" and "entries"')
    rows, cols, entries = doc["rows"], doc["cols"], doc["entries"]
    if not (isinstance(rows, int) and isinstance(cols, int) and rows > 0 and cols > 0):
        raise ShapeError(f"invalid declared shape {rows!r}x{cols!r}")
    if not isinstance(entries, list) or len(entries) != rows * cols:
        count = len(entries) if isinstance(entries, list) else "no"
        raise ShapeError(f"declared {rows}x{cols} but found {count} entries")
    values = []
    for k, pair in enumerate(entries):
        r, c = divmod(k, cols)
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
        ):
            raise ParseError(f"entry {pair!r} is not a [re, im] pair", r + 1, c + 1)
        values.append(complex(pair[0], pair[1]))
    return np.array(values, dtype=np.complex128).reshape(rows, cols)


def read_matrix(path: str | Path, fmt: str | None = None) -> ComplexMatrix:
    """Load a matrix; ``fmt`` defaults to the file extension (``.json`` or CSV)."""
    fmt = fmt or guess_format(path)
    text = Path(path).read_text(encoding="utf-8")
    arr = _read_json(text) if fmt == "json" else _read_csv(text)
    try:
        return ComplexMatrix(arr)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def matrix_to_text(m: Any, fmt: str = "csv", precision: int = 17) -> str:
    arr = as_array(m)
    if fmt == "json":
        entries = [
            [float(f"{z.real:.{precision}g}"), float(f"{z.imag:.{precision}g}")] for z in arr.ravel()
        ]
        return json.dumps({"rows": arr.shape[0], "cols": arr.shape[1], "entries": entries}) + "\n"
    return "".join(",".join(format_complex(z, precision) for z in row) + "\n" for row in arr)


def write_matrix(m: Any, path: str | Path, fmt: str | None = None, precision: int = 17) -> None:
    """Write a matrix with ``precision`` significant digits per real number."""
    fmt = fmt or guess_format(path)
    Path(path).write_text(matrix_to_text(m, fmt, precision), encoding="utf-8")
