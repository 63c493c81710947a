"""Independent optimality checks for the fitting and path code.

Two routes that must agree with the fast implementation:

* exhaustive search over every kink of the convex column objective
  (the optimum of a piecewise-linear convex function sits on a kink), and
* construction of feasible dual multipliers whose objective matches the
  claimed primal value (strong duality), refuting any non-optimal claim.

Everything here is deliberately written from the problem statement, not
from the fitting code, so disagreement between the two routes means a bug.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import DataMatrix, DualCertificate, FittedLine, RatioColumn, SolutionPath
from .fit import fit_line
from .ratios import EmptyPivotError, build_column

__all__ = [
    "OptimalityRefuted",
    "brute_force_column",
    "brute_force_pivot",
    "brute_force_line",
    "dual_certificate",
    "sweep_validate",
    "SweepReport",
]


class OptimalityRefuted(Exception):
    """A claimed column value admits no feasible, complementary dual."""


def brute_force_column(data: DataMatrix, pivot: int, target: int,
                       lam: float) -> tuple[float, float]:
    """Minimize f(t) = sum_i |x[i,target] - t x[i,pivot]| + lam |t| directly.

    Evaluates every candidate t in {0} union {ratios}; f is convex and
    piecewise linear with kinks only at those points, so the minimum is
    attained on a candidate.  Returns (t, f(t)), smallest t on ties.
    """
    if lam < 0.0:
        raise ValueError("penalty weight must be nonnegative")
    X = data.values
    piv = X[:, pivot]
    y = X[:, target]
    nz = np.nonzero(piv)[0]
    if nz.size == 0:
        raise EmptyPivotError(f"column {pivot} is identically zero")
    cands = np.unique(np.concatenate(([0.0], y[nz] / piv[nz])))
    objs = np.abs(y[:, None] - piv[:, None] * cands[None, :]).sum(axis=0)
    objs = objs + lam * np.abs(cands)
    k = int(np.argmin(objs))
    return float(cands[k]), float(objs[k])


def brute_force_pivot(data: DataMatrix, pivot: int, lam: float) -> FittedLine:
    """Assemble one pivot's line column by column, each by brute force."""
    X = data.values
    if not np.any(X[:, pivot]):
        return FittedLine.build(data, np.zeros(data.m), pivot, lam)
    v = np.zeros(data.m)
    v[pivot] = 1.0
    for target in range(data.m):
        if target != pivot:
            v[target], _ = brute_force_column(data, pivot, target, lam)
    return FittedLine.build(data, v, pivot, lam)


def brute_force_line(data: DataMatrix, lam: float) -> FittedLine:
    """Minimum over pivots of the brute-force per-pivot lines."""
    best = None
    for pivot in range(data.m):
        line = brute_force_pivot(data, pivot, lam)
        if best is None or line.objective < best.objective:
            best = line
    return best


def _column_primal(col: RatioColumn, value: float, lam: float) -> float:
    return float((col.weights * np.abs(col.ratios - value)).sum()
                 + lam * abs(value))


def _verify(col: RatioColumn, value: float, lam: float, pi: np.ndarray,
            gamma: float) -> list[str]:
    """Feasibility, complementary slackness, and strong duality checks."""
    tol = 1e-9
    w = col.weights
    scale = max(1.0, col.total_weight, lam)
    problems = []
    if np.any(np.abs(pi) > w + tol * scale):
        problems.append("multiplier exceeds its weight box")
    if abs(gamma) > lam + tol * scale:
        problems.append("penalty multiplier exceeds lam")
    if abs(pi.sum() + gamma) > tol * scale:
        problems.append("multipliers do not balance")
    slack = np.abs(pi) < w - tol * scale
    if np.any(slack & (np.abs(col.ratios - value) * w > tol * scale)):
        problems.append("slack multiplier on a nonzero residual")
    if value != 0.0 and abs(abs(gamma) - lam) > tol * scale:
        problems.append("nonzero snap value needs |gamma| == lam")
    primal = _column_primal(col, value, lam)
    dual = float((col.ratios * pi).sum())
    if abs(primal - dual) > tol * max(1.0, abs(primal)):
        problems.append(f"duality gap {primal - dual:.3e}")
    return problems


def _interior_multipliers(col: RatioColumn, k: int,
                          lam: float) -> tuple[np.ndarray, float]:
    """Multipliers for a snap value taken from sorted position k."""
    sgn = 1.0 if col.ratios[k] >= 0.0 else -1.0
    gamma = -sgn * lam
    pi = np.where(np.arange(len(col)) > k, col.weights, -col.weights)
    pi[k] = -gamma - (pi.sum() - pi[k])
    return pi, gamma


def _zero_multipliers(col: RatioColumn) -> tuple[np.ndarray, float]:
    """Multipliers for a column killed to zero by the penalty.

    Rows whose ratio is zero have no residual at the zero snap value, so
    their multipliers may sit anywhere in the weight box; they soak up as
    much of the signed imbalance as their weights allow.
    """
    pi = col.weights * np.sign(col.ratios)
    imbalance = float(pi.sum())
    for i in np.nonzero(col.ratios == 0.0)[0]:
        give = float(np.clip(-imbalance, -col.weights[i], col.weights[i]))
        pi[i] = give
        imbalance += give
    return pi, float(-pi.sum())


def dual_certificate(col: RatioColumn, value: float,
                     lam: float) -> DualCertificate:
    """Certify that ``value`` solves the column problem at weight lam.

    Builds the candidate multipliers for every sorted position matching
    the value (and the killed-column construction when value == 0), checks
    feasibility, complementary slackness, and strong duality, and returns
    the first certificate that passes.  Raises OptimalityRefuted with the
    violated conditions otherwise.
    """
    if lam < 0.0:
        raise ValueError("penalty weight must be nonnegative")
    failures = []
    matches = np.nonzero(col.ratios == value)[0]
    for k in matches:
        pi, gamma = _interior_multipliers(col, int(k), lam)
        problems = _verify(col, value, lam, pi, gamma)
        if not problems:
            return DualCertificate(pivot=col.pivot, target=col.target,
                                   lam=lam, pi=pi, gamma=gamma)
        failures.append(f"position {k}: " + "; ".join(problems))
    if value == 0.0:
        pi, gamma = _zero_multipliers(col)
        problems = _verify(col, value, lam, pi, gamma)
        if not problems:
            return DualCertificate(pivot=col.pivot, target=col.target,
                                   lam=lam, pi=pi, gamma=gamma)
        failures.append("killed column: " + "; ".join(problems))
    if not failures:
        failures.append("value matches no ratio and is not zero")
    raise OptimalityRefuted(
        f"column {col.target} vs pivot {col.pivot} at lam={lam}: "
        + " | ".join(failures)
    )


@dataclass
class SweepReport:
    """Cross-validation of a solution path on a grid of penalty weights."""

    lambdas: np.ndarray
    path_objectives: np.ndarray
    fit_objectives: np.ndarray
    brute_objectives: np.ndarray
    max_rel_discrepancy: float
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.max_rel_discrepancy <= 1e-9


def sweep_validate(data: DataMatrix, path: SolutionPath,
                   grid_size: int = 200,
                   threads: int | None = None) -> SweepReport:
    """Compare the path against direct fits on a dense weight grid.

    Samples ``grid_size`` weights covering [0, 1.1 * max breakpoint]
    (or [0, 1] for a single-segment path), evaluates the path, a fresh
    windowed fit, and the brute-force fit at each, and reports the largest
    relative discrepancy plus any structural invariant violations.
    """
    failures = []
    try:
        path.check_invariants()
    except ValueError as bad:
        failures.append(str(bad))
    hi = 1.1 * path.breakpoints[-1] if path.breakpoints else 1.0
    grid = np.linspace(0.0, hi, grid_size)
    z_path = np.array([path.objective_at(lam) for lam in grid])
    z_fit = np.array([fit_line(data, lam, threads).objective for lam in grid])
    z_brute = np.array([brute_force_line(data, lam).objective for lam in grid])
    scale = np.maximum(1.0, np.abs(z_brute))
    rel = np.maximum(np.abs(z_path - z_fit), np.abs(z_path - z_brute)) / scale
    worst = int(np.argmax(rel))
    if rel[worst] > 1e-9:
        failures.append(
            f"objective mismatch {rel[worst]:.3e} at lam={grid[worst]!r}"
        )
    return SweepReport(
        lambdas=grid,
        path_objectives=z_path,
        fit_objectives=z_fit,
        brute_objectives=z_brute,
        max_rel_discrepancy=float(rel[worst]),
        failures=failures,
    )
