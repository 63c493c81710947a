"""CSV matrices in, JSON paths and CSV sweep tables out.

Floats are serialized with repr(), the shortest digit string that parses
back to the identical 64-bit value, so every writer here round-trips
losslessly and produces byte-identical files for identical inputs.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Iterable, Mapping

import numpy as np

from .core import DataMatrix, FittedLine, PathSegment, SolutionPath

__all__ = [
    "CsvParseError",
    "read_matrix",
    "write_matrix",
    "write_path",
    "read_path",
    "write_sweep",
]

SWEEP_FIELDS = ("lam", "preserved", "error", "penalty_norm", "objective",
                "l0_fraction", "discordance")


class CsvParseError(ValueError):
    """Bad input table; carries the 1-based file row and column."""

    def __init__(self, message: str, row: int | None = None,
                 column: int | None = None):
        where = ""
        if row is not None:
            where = f" (row {row}" + (f", column {column})" if column is not None
                                      else ")")
        super().__init__(message + where)
        self.row = row
        self.column = column


def read_matrix(path, has_header: bool = False) -> DataMatrix:
    """Read a rectangular numeric CSV as observations x features.

    Blank lines are skipped.  Non-numeric and non-finite cells (including
    literal NaN/inf) fail with the offending cell's location; so do ragged
    rows.
    """
    with open(path, newline="") as fh:
        raw = [(lineno, row) for lineno, row in enumerate(csv.reader(fh), 1)
               if row and any(cell.strip() for cell in row)]
    names: tuple[str, ...] | None = None
    if has_header:
        if not raw:
            raise CsvParseError("no header row in file")
        _, header = raw[0]
        names = tuple(cell.strip() for cell in header)
        raw = raw[1:]
    if not raw:
        raise CsvParseError("no data rows in file")
    width = len(raw[0][1])
    if names is not None and len(names) != width:
        raise CsvParseError(
            f"header has {len(names)} fields but data rows have {width}",
            row=raw[0][0])
    values = np.empty((len(raw), width))
    for i, (lineno, row) in enumerate(raw):
        if len(row) != width:
            raise CsvParseError(
                f"expected {width} fields, found {len(row)}", row=lineno)
        for j, cell in enumerate(row):
            try:
                x = float(cell)
            except ValueError:
                raise CsvParseError(f"non-numeric value {cell.strip()!r}",
                                    row=lineno, column=j + 1) from None
            if not math.isfinite(x):
                raise CsvParseError(f"non-finite value {cell.strip()!r}",
                                    row=lineno, column=j + 1)
            values[i, j] = x
    return DataMatrix(values, column_names=names)


def write_matrix(data: DataMatrix, path, header: bool = False) -> None:
    """Write a DataMatrix as plain CSV, optionally with its column names."""
    with open(path, "w", newline="") as fh:
        out = csv.writer(fh, lineterminator="\n")
        if header:
            names = data.column_names or tuple(
                f"x{j + 1}" for j in range(data.m))
            out.writerow(names)
        for row in data.values:
            out.writerow([repr(float(x)) for x in row])


def _seg_dict(seg: PathSegment) -> dict:
    return {
        "lambda_lo": seg.lambda_lo,
        "lambda_hi": None if math.isinf(seg.lambda_hi) else seg.lambda_hi,
        "preserved": seg.line.preserved,
        "v": [float(x) for x in seg.line.v],
        "error": seg.line.error,
        "penalty_norm": seg.line.penalty_norm,
        "z_lo": seg.z_lo,
        "z_hi": None if math.isinf(seg.z_hi) else seg.z_hi,
    }


def write_path(path_obj: SolutionPath, out) -> None:
    """Serialize a solution path as a JSON array of segments.

    The terminal segment's unbounded endpoint becomes null; everything
    else is a plain number and the file reads back to an identical path.
    """
    payload = [_seg_dict(s) for s in path_obj.segments]
    with open(out, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_path(path) -> SolutionPath:
    """Rebuild a SolutionPath from a file written by write_path."""
    with open(path) as fh:
        payload = json.load(fh)
    segments = []
    for entry in payload:
        lo = float(entry["lambda_lo"])
        hi = math.inf if entry["lambda_hi"] is None else float(entry["lambda_hi"])
        err = float(entry["error"])
        pen = float(entry["penalty_norm"])
        line = FittedLine(v=np.asarray(entry["v"], dtype=np.float64),
                          preserved=int(entry["preserved"]), lam=lo,
                          error=err, penalty_norm=pen,
                          objective=err + lo * pen)
        z_hi = math.inf if entry["z_hi"] is None else float(entry["z_hi"])
        segments.append(PathSegment(lambda_lo=lo, lambda_hi=hi, line=line,
                                    z_lo=float(entry["z_lo"]), z_hi=z_hi))
    return SolutionPath(tuple(segments))


def write_sweep(rows: Iterable[Mapping], out) -> None:
    """Write sweep rows as CSV with a fixed column order.

    Each row maps sweep field names to numbers; a missing or None
    discordance (no ground truth available) becomes an empty cell.
    """
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=SWEEP_FIELDS,
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            rec = {}
            for key in SWEEP_FIELDS:
                val = row.get(key)
                if val is None:
                    rec[key] = ""
                elif key == "preserved":
                    rec[key] = int(val)
                else:
                    rec[key] = repr(float(val))
            writer.writerow(rec)
