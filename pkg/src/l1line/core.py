"""Core containers for l1-norm line fitting.

A fitted line always passes through the origin and is written as the span of
a direction vector v with one coordinate pinned to 1 (the preserved
coordinate).  Each data row is projected onto the line using its preserved
coordinate as the projection coefficient, which is what turns the fit into a
stack of independent one-dimensional column problems.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

__all__ = [
    "DataMatrix",
    "FittedLine",
    "RatioColumn",
    "PathSegment",
    "SolutionPath",
    "DualCertificate",
    "residual_error",
]


def _readonly(a, dtype=np.float64) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class DataMatrix:
    """Dense n x m matrix of observations, one row per point.

    Values are validated to be finite up front and the backing array is
    marked read-only, so a DataMatrix can be shared freely across worker
    threads.  ``column_names`` is optional metadata carried along from CSV
    headers for reporting.
    """

    values: np.ndarray
    column_names: tuple[str, ...] | None = None

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {vals.shape}")
        n, m = vals.shape
        if n < 1:
            raise ValueError("need at least one observation")
        if m < 2:
            raise ValueError(f"need at least two features, got {m}")
        if not np.isfinite(vals).all():
            i, j = map(int, np.argwhere(~np.isfinite(vals))[0])
            raise ValueError(f"non-finite value at row {i}, column {j}")
        if self.column_names is not None:
            names = tuple(str(c) for c in self.column_names)
            if len(names) != m:
                raise ValueError(
                    f"{len(names)} column names for {m} columns"
                )
            object.__setattr__(self, "column_names", names)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]


def residual_error(data: DataMatrix, v: np.ndarray, preserved: int) -> float:
    """Sum of |x_ij - v_j * x_i,preserved| over the whole matrix.

    The projection coefficient of row i is its preserved coordinate, so the
    preserved column contributes zero residual whenever v[preserved] == 1.
    The reduction is a single row-major sum over a C-contiguous temporary,
    which keeps the value bit-identical regardless of worker threading.
    """
    if not 0 <= preserved < data.m:
        raise IndexError(f"preserved column {preserved} out of range")
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (data.m,):
        raise ValueError(f"v has shape {v.shape}, expected ({data.m},)")
    X = data.values
    return float(np.abs(X - np.outer(X[:, preserved], v)).sum())


@dataclass(frozen=True)
class FittedLine:
    """One fitted direction with its objective bookkeeping.

    ``v[preserved]`` is exactly 1, except for the degenerate all-zero line
    returned when the pivot column vanishes (then v == 0 and the "line" is
    just the origin).  ``lam`` is the penalty weight the line was fitted at;
    the field avoids the reserved word.
    """

    v: np.ndarray
    preserved: int
    lam: float
    error: float
    penalty_norm: float
    objective: float

    def __post_init__(self):
        v = _readonly(self.v)
        object.__setattr__(self, "v", v)
        if self.lam < 0.0:
            raise ValueError("lam must be nonnegative")
        if v[self.preserved] != 1.0 and np.any(v != 0.0):
            raise ValueError("v[preserved] must be exactly 1 for a nonzero line")
        expected = self.error + self.lam * self.penalty_norm
        if not math.isclose(self.objective, expected, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(
                f"objective {self.objective!r} != error + lam*penalty {expected!r}"
            )

    @classmethod
    def build(cls, data: DataMatrix, v: np.ndarray, preserved: int,
              lam: float) -> "FittedLine":
        """Fill in error/penalty/objective from the direction alone."""
        err = residual_error(data, v, preserved)
        pen = float(np.abs(np.asarray(v, dtype=np.float64)).sum())
        return cls(v=v, preserved=preserved, lam=float(lam), error=err,
                   penalty_norm=pen, objective=err + lam * pen)

    def objective_at(self, lam: float) -> float:
        """Objective this direction would score under another penalty weight."""
        return self.error + lam * self.penalty_norm


@dataclass(frozen=True)
class RatioColumn:
    """Sorted ratio view of one target column against a pivot column.

    Rows with a zero pivot entry are dropped.  ``ratios`` holds
    x[i, target] / x[i, pivot] sorted ascending (ties keep source-row
    order), ``weights`` the matching |x[i, pivot]|, and ``prefix_weights``
    the inclusive running sum of weights.
    """

    pivot: int
    target: int
    ratios: np.ndarray
    weights: np.ndarray
    source_rows: np.ndarray
    prefix_weights: np.ndarray
    total_weight: float

    def __post_init__(self):
        if self.ratios.size == 0:
            raise ValueError("a ratio column cannot be empty")
        object.__setattr__(self, "ratios", _readonly(self.ratios))
        object.__setattr__(self, "weights", _readonly(self.weights))
        object.__setattr__(self, "prefix_weights", _readonly(self.prefix_weights))
        object.__setattr__(self, "source_rows",
                           _readonly(self.source_rows, dtype=np.intp))

    def __len__(self) -> int:
        return int(self.ratios.size)


@dataclass(frozen=True)
class PathSegment:
    """Half-open interval [lambda_lo, lambda_hi) with one optimal line.

    The terminal segment has lambda_hi == inf.  Objectives are affine in
    the penalty weight: z(lam) = error + lam * penalty_norm.
    """

    lambda_lo: float
    lambda_hi: float
    line: FittedLine
    z_lo: float
    z_hi: float

    def contains(self, lam: float) -> bool:
        return self.lambda_lo <= lam < self.lambda_hi

    def objective_at(self, lam: float) -> float:
        return self.line.error + lam * self.line.penalty_norm


@dataclass(frozen=True)
class SolutionPath:
    """Piecewise-constant optimal lines over all penalty weights.

    Segments tile [0, inf) with half-open intervals, so a weight sitting
    exactly on a breakpoint evaluates through the segment to its right.
    """

    segments: tuple[PathSegment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ValueError("a solution path needs at least one segment")

    @property
    def breakpoints(self) -> list[float]:
        """Interior segment boundaries, ascending (0 and inf excluded)."""
        return [s.lambda_lo for s in self.segments[1:]]

    def segment_at(self, lam: float) -> PathSegment:
        if lam < 0.0:
            raise ValueError("penalty weight must be nonnegative")
        starts = [s.lambda_lo for s in self.segments]
        idx = bisect_right(starts, lam) - 1
        return self.segments[idx]

    def line_at(self, lam: float) -> FittedLine:
        return self.segment_at(lam).line

    def objective_at(self, lam: float) -> float:
        return self.segment_at(lam).objective_at(lam)

    def check_invariants(self, tol: float = 1e-9) -> None:
        """Raise ValueError when the segment structure is malformed.

        Checks the half-open tiling of [0, inf), continuity and concavity
        of the objective, nonincreasing penalty norms, and that the
        terminal direction is a unit vector (or the all-zero degenerate
        line, possible only when the data has a zero column).
        """
        segs = self.segments
        if segs[0].lambda_lo != 0.0:
            raise ValueError("path must start at lambda 0")
        if not math.isinf(segs[-1].lambda_hi):
            raise ValueError("terminal segment must extend to infinity")
        for a, b in zip(segs, segs[1:]):
            if a.lambda_hi != b.lambda_lo:
                raise ValueError(
                    f"gap between segments at {a.lambda_hi} vs {b.lambda_lo}"
                )
            if b.lambda_lo <= a.lambda_lo:
                raise ValueError("segment boundaries must increase")
            za = a.objective_at(b.lambda_lo)
            zb = b.objective_at(b.lambda_lo)
            scale = max(1.0, abs(za), abs(zb))
            if abs(za - zb) > tol * scale:
                raise ValueError(
                    f"objective jump {za} -> {zb} at lambda {b.lambda_lo}"
                )
            if b.line.penalty_norm > a.line.penalty_norm + 1e-12:
                raise ValueError("penalty norm must not increase with lambda")
        last = segs[-1].line
        nonzero = np.abs(last.v) > 0.0
        if nonzero.sum() > 1:
            raise ValueError("terminal line must be a unit vector or zero")


@dataclass(frozen=True)
class DualCertificate:
    """Feasible dual multipliers proving one column value optimal.

    ``pi`` has one entry per row of the ratio column and ``gamma``
    multiplies the penalty constraint.
    """

    pivot: int
    target: int
    lam: float
    pi: np.ndarray
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "pi", _readonly(self.pi))
