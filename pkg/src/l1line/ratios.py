"""Sorted-ratio engine shared by the fitting and path routines.

For a pivot column p and target column j, the optimal snap value of v_j is
always one of the ratios x[i, j] / x[i, p], and which one wins is decided by
a weighted-median style window test on the sorted ratios.  Everything here
is pure preprocessing: building the sorted view, and the per-position
admission windows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DataMatrix, RatioColumn

__all__ = [
    "EmptyPivotError",
    "build_column",
    "window_bounds",
    "pivot_tableau",
    "PivotTableau",
]


class EmptyPivotError(ValueError):
    """Pivot column is identically zero; it only yields the degenerate line."""


def _check_pair(data: DataMatrix, pivot: int, target: int) -> None:
    if not 0 <= pivot < data.m:
        raise IndexError(f"pivot column {pivot} out of range")
    if not 0 <= target < data.m:
        raise IndexError(f"target column {target} out of range")
    if pivot == target:
        raise ValueError("pivot and target must differ")


def build_column(data: DataMatrix, pivot: int, target: int) -> RatioColumn:
    """Sorted ratios of one target column against a pivot column.

    Raises EmptyPivotError when the pivot column has no nonzero entry.
    Ties between equal ratios keep ascending source-row order (stable sort),
    which pins down every downstream tie-break.
    """
    _check_pair(data, pivot, target)
    X = data.values
    piv = X[:, pivot]
    rows = np.nonzero(piv)[0]
    if rows.size == 0:
        raise EmptyPivotError(f"column {pivot} is identically zero")
    ratios = X[rows, target] / piv[rows]
    weights = np.abs(piv[rows])
    order = np.argsort(ratios, kind="stable")
    ratios = ratios[order]
    weights = weights[order]
    prefix = np.cumsum(weights)
    return RatioColumn(
        pivot=pivot,
        target=target,
        ratios=ratios,
        weights=weights,
        source_rows=rows[order],
        prefix_weights=prefix,
        total_weight=float(prefix[-1]),
    )


def window_bounds(col: RatioColumn, k: int) -> tuple[float, float]:
    """Admission window (lower, upper] for sorted position k.

    Position k is the optimal snap value exactly when
    sign(ratio_k) * lam falls in the window (zero ratios count as
    positive).  Writing T for the total weight and P for the inclusive
    prefix sums, lower(k) = T - 2 P[k] and upper(k) = T - 2 P[k-1], so
    consecutive windows share endpoints exactly (upper(k+1) == lower(k))
    and the whole stack tiles (-T, T].
    """
    if not 0 <= k < len(col):
        raise IndexError(f"position {k} out of range for column of {len(col)}")
    T = col.total_weight
    lower = T - 2.0 * float(col.prefix_weights[k])
    prev = float(col.prefix_weights[k - 1]) if k > 0 else 0.0
    upper = T - 2.0 * prev
    return lower, upper


@dataclass(frozen=True)
class PivotTableau:
    """All ratio columns of one pivot, sorted and prefix-summed in bulk.

    Column c of each array describes target ``targets[c]``.  ``prefix_prev``
    is the exclusive prefix sum (prefix shifted down one row) and ``totals``
    the per-column final prefix, kept separately so window endpoints reuse
    the exact same floats as ``window_bounds`` on a single column.
    """

    pivot: int
    targets: np.ndarray
    ratios: np.ndarray
    weights: np.ndarray
    source_rows: np.ndarray
    prefix: np.ndarray
    prefix_prev: np.ndarray
    totals: np.ndarray


def pivot_tableau(data: DataMatrix, pivot: int) -> PivotTableau:
    """Build every ratio column for one pivot in a few array passes."""
    if not 0 <= pivot < data.m:
        raise IndexError(f"pivot column {pivot} out of range")
    X = data.values
    piv = X[:, pivot]
    rows = np.nonzero(piv)[0]
    if rows.size == 0:
        raise EmptyPivotError(f"column {pivot} is identically zero")
    targets = np.array([j for j in range(data.m) if j != pivot], dtype=np.intp)
    R = X[np.ix_(rows, targets)] / piv[rows, None]
    W = np.abs(piv[rows])
    order = np.argsort(R, axis=0, kind="stable")
    Rs = np.take_along_axis(R, order, axis=0)
    Ws = W[order]
    prefix = np.cumsum(Ws, axis=0)
    prev = np.vstack([np.zeros((1, targets.size)), prefix[:-1]])
    return PivotTableau(
        pivot=pivot,
        targets=targets,
        ratios=Rs,
        weights=Ws,
        source_rows=rows[order],
        prefix=prefix,
        prefix_prev=prev,
        totals=prefix[-1].copy(),
    )
