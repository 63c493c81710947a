"""Synthetic data: points on a hidden line, optionally contaminated.

All randomness flows from one seed through numpy's default generator, and
Laplace draws go through an explicit inverse CDF, so a given seed pins
down the exact data bytes independent of platform or thread count.
"""

from __future__ import annotations

import numpy as np

from .core import DataMatrix

__all__ = ["laplace", "gen_line_data", "gen_outlier_data"]


def laplace(rng: np.random.Generator, scale: float,
            size: tuple[int, ...] | int) -> np.ndarray:
    """Laplace(0, scale) samples via the inverse CDF of uniform draws."""
    u = rng.uniform(-0.5, 0.5, size=size)
    # clamp keeps log() off exact zero at the (measure-zero) endpoints
    tiny = np.finfo(np.float64).tiny
    return -scale * np.sign(u) * np.log(np.maximum(1.0 - 2.0 * np.abs(u), tiny))


def _unit_direction(rng: np.random.Generator, m: int,
                    half_range: float) -> np.ndarray:
    v = rng.uniform(-half_range, half_range, size=m)
    nrm = float(np.linalg.norm(v))
    while nrm == 0.0:
        v = rng.uniform(-half_range, half_range, size=m)
        nrm = float(np.linalg.norm(v))
    return v / nrm


def gen_line_data(m: int, n: int, seed: int, noise_scale: float = 0.0,
                  coef_range: float = 100.0) -> tuple[DataMatrix, np.ndarray]:
    """Points along a random origin line, plus the true direction.

    The direction has uniform(-1, 1) coordinates rescaled to unit l2-norm;
    each point is a uniform(-coef_range, coef_range) multiple of it, with
    Laplace(0, noise_scale) noise added when noise_scale > 0.
    """
    if m < 2:
        raise ValueError(f"need at least two features, got {m}")
    if n < 1:
        raise ValueError(f"need at least one observation, got {n}")
    if noise_scale < 0.0:
        raise ValueError("noise_scale must be nonnegative")
    rng = np.random.default_rng(seed)
    v = _unit_direction(rng, m, 1.0)
    alpha = rng.uniform(-coef_range, coef_range, size=n)
    X = np.outer(alpha, v)
    if noise_scale > 0.0:
        X = X + laplace(rng, noise_scale, (n, m))
    return DataMatrix(X), v


def gen_outlier_data(m: int, n: int, n_outliers: int,
                     seed: int) -> tuple[DataMatrix, np.ndarray]:
    """Heavy-noise line data with far-off outlier rows appended.

    Inliers follow a uniform(-10, 10)-coordinate direction (normalized)
    with uniform(-100, 100) coefficients and Laplace(0, 10) noise.
    Outlier rows, placed last, draw their first five coordinates from
    uniform(50, 100) and add Laplace(0, 1) noise in every coordinate.
    """
    if not 0 <= n_outliers <= n:
        raise ValueError(f"n_outliers {n_outliers} must be in [0, {n}]")
    if n_outliers > 0 and m < 5:
        raise ValueError("outlier rows need at least five coordinates")
    rng = np.random.default_rng(seed)
    v = _unit_direction(rng, m, 10.0)
    n_in = n - n_outliers
    X = np.empty((n, m))
    alpha = rng.uniform(-100.0, 100.0, size=n_in)
    X[:n_in] = np.outer(alpha, v) + laplace(rng, 10.0, (n_in, m))
    if n_outliers > 0:
        rows = laplace(rng, 1.0, (n_outliers, m))
        rows[:, :5] += rng.uniform(50.0, 100.0, size=(n_outliers, 5))
        X[n_in:] = rows
    return DataMatrix(X), v
