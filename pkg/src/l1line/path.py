"""Regularization path: every penalty weight where the optimal line changes.

Two layers of breakpoints.  First, for each pivot, the weights where one of
its column snap values changes (computed in closed form from the sorted
ratio windows).  Second, the weights where the identity of the best pivot
changes: within one interval of the first grid every pivot's objective is
affine in the weight, so the optimal line is the lower envelope of at most
m straight lines and new breakpoints appear only at line crossings.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .core import DataMatrix, FittedLine, PathSegment, SolutionPath
from .parallel import map_indices
from .ratios import EmptyPivotError, pivot_tableau

__all__ = [
    "PivotBreakpoints",
    "PivotSolutions",
    "pivot_breakpoints",
    "major_breakpoints",
    "merge_path",
    "solution_path",
]

# breakpoints closer than this (absolute) are treated as one
DEDUP_TOL = 1e-9
# penalty norms closer than this (relative) count as tied slopes
SLOPE_TOL = 1e-9


@dataclass(frozen=True)
class PivotBreakpoints:
    """Piecewise-constant snap values for every column of one pivot.

    ``entries[target]`` is an ascending tuple of (weight, value) pairs:
    the column takes ``value`` from that weight (inclusive) until the next
    pair, and the final pair is always (lambda_max[target], 0.0), the
    weight from which the penalty keeps the column at zero for good.
    """

    pivot: int
    entries: dict[int, tuple[tuple[float, float], ...]]
    lambda_max: dict[int, float]

    def column_value(self, target: int, lam: float) -> float:
        """Snap value of one column, right-continuous step lookup."""
        if lam < 0.0:
            raise ValueError("penalty weight must be nonnegative")
        entries = self.entries[target]
        idx = bisect_right([bp for bp, _ in entries], lam) - 1
        return entries[idx][1]

    def breakpoint_set(self) -> set[float]:
        """Weights where some column changes value.

        Unclamped positive starts plus each column's death weight; a start
        clamped up to 0 is the initial state, not a change, but a death at
        exactly 0 does appear.
        """
        out: set[float] = set()
        for target, entries in self.entries.items():
            out.add(self.lambda_max[target])
            for bp, _ in entries[:-1]:
                if bp > 0.0:
                    out.add(bp)
        return out


def pivot_breakpoints(data: DataMatrix, pivot: int) -> PivotBreakpoints:
    """Closed-form breakpoints of one pivot's snap values.

    Sorted position k of a column holds the optimum for a half-open run of
    weights starting at sign(ratio_k) * (above_k - below_k) - weight_k and
    of width twice weight_k.  Runs whose right end is not positive never
    intersect the feasible weights and are dropped; starts are clamped at
    0.  The largest right end is where the column dies to zero.
    """
    tab = pivot_tableau(data, pivot)
    sgn = np.where(tab.ratios >= 0.0, 1.0, -1.0)
    center = tab.totals - tab.prefix - tab.prefix_prev
    start = sgn * center - tab.weights
    right = start + 2.0 * tab.weights
    entries: dict[int, tuple[tuple[float, float], ...]] = {}
    lambda_max: dict[int, float] = {}
    for c in range(tab.targets.size):
        target = int(tab.targets[c])
        live = np.nonzero(right[:, c] > 0.0)[0]
        col = [(max(0.0, float(start[k, c])), float(tab.ratios[k, c]))
               for k in live]
        death = max(0.0, float(right[:, c].max()))
        col.append((death, 0.0))
        col.sort(key=lambda e: e[0])
        entries[target] = tuple(col)
        lambda_max[target] = death
    return PivotBreakpoints(pivot=pivot, entries=entries, lambda_max=lambda_max)


@dataclass(frozen=True)
class PivotSolutions:
    """Breakpoint maps for every usable pivot, plus the degenerate ones."""

    data: DataMatrix
    pivots: dict[int, PivotBreakpoints]
    degenerate: tuple[int, ...]

    def solution_at(self, pivot: int, lam: float) -> np.ndarray:
        """Direction vector of one pivot at a given weight."""
        v = np.zeros(self.data.m)
        if pivot in self.pivots:
            v[pivot] = 1.0
            pb = self.pivots[pivot]
            for target, entries in pb.entries.items():
                idx = bisect_right([bp for bp, _ in entries], lam) - 1
                v[target] = entries[idx][1]
        elif pivot not in self.degenerate:
            raise IndexError(f"unknown pivot {pivot}")
        return v


def major_breakpoints(data: DataMatrix, threads: int | None = None
                      ) -> tuple[np.ndarray, PivotSolutions]:
    """All candidate weights where any pivot's own solution changes.

    Returns the ascending deduplicated weights (always starting at 0)
    together with the per-pivot solution maps; the unbounded terminal
    interval after the last weight is implicit.  Pivot columns that are
    identically zero contribute only the degenerate all-zero line.
    """
    def one(pivot: int) -> PivotBreakpoints | None:
        try:
            return pivot_breakpoints(data, pivot)
        except EmptyPivotError:
            return None

    results = map_indices(one, data.m, threads)
    pivots = {p: r for p, r in enumerate(results) if r is not None}
    degenerate = tuple(p for p, r in enumerate(results) if r is None)
    vals = [0.0]
    for pb in pivots.values():
        for entries in pb.entries.values():
            vals.extend(bp for bp, _ in entries)
    vals.sort()
    dedup = [vals[0]]
    for v in vals[1:]:
        if v - dedup[-1] > DEDUP_TOL:
            dedup.append(v)
    return np.asarray(dedup), PivotSolutions(data, pivots, degenerate)


def _snap_index(lambdas: np.ndarray, bp: float) -> int:
    idx = int(np.searchsorted(lambdas, bp))
    if idx < lambdas.size and abs(float(lambdas[idx]) - bp) <= DEDUP_TOL:
        return idx
    if idx > 0 and abs(float(lambdas[idx - 1]) - bp) <= DEDUP_TOL:
        return idx - 1
    raise AssertionError(f"breakpoint {bp} missing from the weight grid")


def merge_path(lambdas: np.ndarray, solutions: PivotSolutions,
               data: DataMatrix) -> SolutionPath:
    """Lower envelope of the per-pivot objectives across the weight grid.

    Within one grid interval each pivot's objective is the line
    z = error + lam * penalty.  A candidate pivot takes over at the largest
    crossing with a steeper competitor (that is where it finally beats all
    of them), unless a shallower competitor overtakes it first; candidates
    tied in penalty norm but strictly worse in error are knocked out.
    Candidate starts are then reconciled by picking the minimum objective
    at each sub-interval midpoint, smallest pivot index on ties.
    """
    X = data.values
    lambdas = np.asarray(lambdas, dtype=np.float64)
    m = data.m
    K = lambdas.size
    colsums = np.abs(X).sum(axis=0)

    # Affine state per usable pivot: direction and exact per-column errors.
    state: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for pivot in solutions.pivots:
        v = np.zeros(m)
        v[pivot] = 1.0
        colerr = colsums.copy()
        colerr[pivot] = 0.0
        state[pivot] = (v, colerr)
    pivot_ids = sorted(state)
    degen_error = float(np.abs(X).sum()) if solutions.degenerate else 0.0

    events: list[list[tuple[int, int, float]]] = [[] for _ in range(K)]
    for pivot, pb in solutions.pivots.items():
        for target, entries in pb.entries.items():
            for bp, val in entries:
                events[_snap_index(lambdas, bp)].append((pivot, target, val))

    segments: list[PathSegment] = []
    open_lo: float | None = None
    open_line: FittedLine | None = None

    def close(at: float) -> None:
        nonlocal open_lo, open_line
        if open_line is None:
            return
        if math.isinf(at):
            z_hi = math.inf if open_line.penalty_norm > 0.0 else open_line.error
        else:
            z_hi = open_line.objective_at(at)
        segments.append(PathSegment(lambda_lo=open_lo, lambda_hi=at,
                                    line=open_line, z_lo=open_line.objective,
                                    z_hi=z_hi))
        open_lo = open_line = None

    for k in range(K):
        lam_k = float(lambdas[k])
        lam_next = float(lambdas[k + 1]) if k + 1 < K else math.inf
        for pivot, target, val in events[k]:
            v, colerr = state[pivot]
            v[target] = val
            colerr[target] = float(np.abs(X[:, target] - val * X[:, pivot]).sum())

        # competitor lines over [lam_k, lam_next): (pivot, z at lam_k, slope)
        cand: list[tuple[int, float, float]] = []
        for p in pivot_ids:
            v, colerr = state[p]
            cand.append((p, float(colerr.sum()) + lam_k * float(np.abs(v).sum()),
                         float(np.abs(v).sum())))
        for p in solutions.degenerate:
            cand.append((p, degen_error, 0.0))
        cand.sort(key=lambda t: t[0])

        starts: list[float] = []
        for p, zp, sp in cand:
            beta_lo, beta_hi = -math.inf, math.inf
            dominated = False
            for q, zq, sq in cand:
                if q == p:
                    continue
                if abs(sq - sp) <= SLOPE_TOL * max(1.0, sp, sq):
                    if zp > zq:
                        dominated = True
                        break
                elif sq > sp:
                    beta_lo = max(beta_lo, (zp - zq) / (sq - sp))
                else:
                    beta_hi = min(beta_hi, (zq - zp) / (sp - sq))
            if dominated:
                continue
            if 0.0 < beta_lo < beta_hi and lam_k + beta_lo <= lam_next:
                starts.append(lam_k + beta_lo)
            elif beta_lo <= 0.0 < beta_hi:
                starts.append(lam_k)

        bounds = [lam_k]
        for b in sorted(starts):
            if b - bounds[-1] > DEDUP_TOL and lam_next - b > DEDUP_TOL:
                bounds.append(b)

        for i, a in enumerate(bounds):
            b = bounds[i + 1] if i + 1 < len(bounds) else lam_next
            probe = a + 1.0 if math.isinf(b) else 0.5 * (a + b)
            best = min(cand, key=lambda t: (t[1] + (probe - lam_k) * t[2], t[0]))
            p_star = best[0]
            v_star = (state[p_star][0] if p_star in state
                      else np.zeros(m))
            if open_line is not None and open_line.preserved == p_star \
                    and np.array_equal(open_line.v, v_star):
                continue
            close(a)
            open_lo = a
            open_line = FittedLine.build(data, v_star.copy(), p_star, a)
    close(math.inf)
    return SolutionPath(tuple(segments))


def solution_path(data: DataMatrix, threads: int | None = None) -> SolutionPath:
    """Breakpoint grid plus envelope merge in one call."""
    lambdas, sols = major_breakpoints(data, threads)
    return merge_path(lambdas, sols, data)
