"""Line fitting at a fixed penalty weight.

The full fit tries every column as the preserved coordinate.  For one
pivot, each remaining column is an independent one-dimensional problem
solved by the sorted-ratio window test; the pivot whose assembled line has
the smallest objective wins, smallest pivot index on ties.
"""

from __future__ import annotations

import numpy as np

from .core import DataMatrix, FittedLine, RatioColumn
from .parallel import map_indices
from .ratios import EmptyPivotError, PivotTableau, pivot_tableau

__all__ = ["solve_column", "fit_for_pivot", "fit_line", "degenerate_line"]


def _check_lam(lam: float) -> float:
    lam = float(lam)
    if not lam >= 0.0:
        raise ValueError(f"penalty weight must be nonnegative, got {lam}")
    return lam


def solve_column(col: RatioColumn, lam: float) -> float:
    """Optimal snap value for one column at penalty weight lam.

    Tests sign(ratio) * lam against each sorted position's admission
    window (zero ratios probe the positive side) and returns the matched
    ratio, or 0.0 when no window matches and the penalty has killed the
    column.  The windows tile disjointly, so at most one position can
    match for any lam >= 0.
    """
    lam = _check_lam(lam)
    T = col.total_weight
    lower = T - 2.0 * col.prefix_weights
    upper = np.empty_like(lower)
    upper[0] = T
    upper[1:] = lower[:-1]
    probe = np.where(col.ratios >= 0.0, lam, -lam)
    hit = np.nonzero((probe > lower) & (probe <= upper))[0]
    if __debug__:
        assert hit.size <= 1, "admission windows overlapped"
    if hit.size == 0:
        return 0.0
    return float(col.ratios[hit[0]])


def _snap_all(tab: PivotTableau, lam: float) -> np.ndarray:
    """Vectorized solve_column across every target of one pivot."""
    lower = tab.totals - 2.0 * tab.prefix
    upper = tab.totals - 2.0 * tab.prefix_prev
    probe = np.where(tab.ratios >= 0.0, lam, -lam)
    hit = (probe > lower) & (probe <= upper)
    if __debug__:
        assert int(hit.sum(axis=0).max(initial=0)) <= 1, \
            "admission windows overlapped"
    has = hit.any(axis=0)
    first = hit.argmax(axis=0)
    vals = tab.ratios[first, np.arange(tab.targets.size)]
    return np.where(has, vals, 0.0)


def degenerate_line(data: DataMatrix, pivot: int, lam: float) -> FittedLine:
    """The all-zero line an identically-zero pivot column falls back to.

    Every projection coefficient is zero, so the best this pivot can do is
    collapse the line to the origin: error = sum |x|, no penalty.
    """
    return FittedLine.build(data, np.zeros(data.m), pivot, _check_lam(lam))


def fit_for_pivot(data: DataMatrix, pivot: int, lam: float) -> FittedLine:
    """Best line that preserves one given coordinate."""
    lam = _check_lam(lam)
    try:
        tab = pivot_tableau(data, pivot)
    except EmptyPivotError:
        return degenerate_line(data, pivot, lam)
    v = np.zeros(data.m)
    v[pivot] = 1.0
    v[tab.targets] = _snap_all(tab, lam)
    return FittedLine.build(data, v, pivot, lam)


def fit_line(data: DataMatrix, lam: float,
             threads: int | None = None) -> FittedLine:
    """Best coordinate-preserving line over all pivots.

    Pivots are solved independently (one task each) and reduced in pivot
    order with a strict-less comparison, so ties go to the smallest pivot
    index and the result never depends on the worker count.
    """
    lam = _check_lam(lam)
    lines = map_indices(lambda p: fit_for_pivot(data, p, lam), data.m, threads)
    best = lines[0]
    for line in lines[1:]:
        if line.objective < best.objective:
            best = line
    return best
