"""Successive components via deflation, plus the evaluation metrics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DataMatrix, FittedLine
from .fit import fit_line

__all__ = [
    "SubspaceFit",
    "deflate",
    "fit_subspace",
    "discordance",
    "l0_fraction",
]


def deflate(data: DataMatrix, v: np.ndarray) -> DataMatrix:
    """Project every row onto the orthogonal complement of span{v}.

    Returns X(I - w w^T) with w = v / ||v||_2, so each output row has zero
    inner product with v.  Column names carry over unchanged.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (data.m,):
        raise ValueError(f"v has shape {v.shape}, expected ({data.m},)")
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise ValueError("cannot deflate along the zero vector")
    w = v / nrm
    X = data.values
    return DataMatrix(X - np.outer(X @ w, w), column_names=data.column_names)


@dataclass(frozen=True)
class SubspaceFit:
    """Components found by repeated fit-then-deflate.

    ``degenerate`` is set when the deflated matrix dropped to numerical
    zero before the requested number of components, so fewer were fitted.
    """

    components: tuple[FittedLine, ...]
    degenerate: bool

    def __len__(self) -> int:
        return len(self.components)


def fit_subspace(data: DataMatrix, lam: float, k: int,
                 threads: int | None = None) -> SubspaceFit:
    """Fit up to k components, deflating the data between fits.

    Each component is the best line on the data with all earlier
    components projected out.  Stops early (and flags the result) once the
    deflated matrix is zero relative to the original scale, since any
    further "component" would be fitting pure rounding noise.
    """
    if not 1 <= k < data.m:
        raise ValueError(f"component count {k} must be in [1, {data.m - 1}]")
    if lam < 0.0 or not math.isfinite(lam):
        raise ValueError("penalty weight must be finite and nonnegative")
    scale = max(1.0, float(np.abs(data.values).max()))
    cur = data
    components: list[FittedLine] = []
    for _ in range(k):
        if float(np.abs(cur.values).max()) <= 1e-10 * scale:
            return SubspaceFit(tuple(components), degenerate=True)
        line = fit_line(cur, lam, threads)
        components.append(line)
        cur = deflate(cur, line.v)
    return SubspaceFit(tuple(components), degenerate=False)


def discordance(v_true: np.ndarray, v_est: np.ndarray) -> float:
    """Sine of the principal angle between two directions, in [0, 1].

    Invariant to sign flips and nonzero rescaling of either argument:
    collinear vectors score 0, orthogonal ones score 1.  Computed as the
    norm of the component of one unit vector orthogonal to the other;
    sqrt(1 - cos^2) would bottom out near 1e-8 for tiny angles, this form
    stays accurate down to rounding noise.
    """
    a = np.asarray(v_true, dtype=np.float64)
    b = np.asarray(v_est, dtype=np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("discordance needs two nonzero vectors")
    ah = a / na
    bh = b / nb
    rej = bh - float(ah @ bh) * ah
    return min(1.0, float(np.linalg.norm(rej)))


def l0_fraction(v: np.ndarray, tol: float = 1e-9) -> float:
    """Fraction of coordinates with magnitude above tol.

    Column values are exact zeros by construction, so the tolerance only
    guards float error accumulated by downstream transformations.
    """
    if tol < 0.0:
        raise ValueError("tolerance must be nonnegative")
    v = np.asarray(v, dtype=np.float64)
    return float(np.count_nonzero(np.abs(v) > tol)) / v.size
