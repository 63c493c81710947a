"""Figure rendering for CLI reports (headless matplotlib backend)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .core import SolutionPath

__all__ = ["render_path_figure", "render_sweep_figure"]


def _path_extent(path_obj: SolutionPath) -> float:
    bps = path_obj.breakpoints
    return 1.25 * bps[-1] if bps else 1.0


def render_path_figure(path_obj: SolutionPath, out) -> None:
    """Objective and coefficient profiles of a path, one PNG.

    Top panel: the piecewise-linear optimal objective with breakpoints
    marked.  Bottom panel: each coordinate of v as a step function of the
    penalty weight, which makes the support shrinking toward a single
    coordinate visible at a glance.
    """
    extent = _path_extent(path_obj)
    fig, (ax_z, ax_v) = plt.subplots(
        2, 1, figsize=(7.0, 6.0), sharex=True,
        gridspec_kw={"height_ratios": [2, 3]})

    for seg in path_obj.segments:
        hi = extent if math.isinf(seg.lambda_hi) else seg.lambda_hi
        ax_z.plot([seg.lambda_lo, hi],
                  [seg.objective_at(seg.lambda_lo), seg.objective_at(hi)],
                  color="C0")
    for bp in path_obj.breakpoints:
        ax_z.axvline(bp, color="gray", linestyle=":", linewidth=0.8)
        ax_v.axvline(bp, color="gray", linestyle=":", linewidth=0.8)
    ax_z.set_ylabel("objective")
    ax_z.set_title("regularization path")

    m = path_obj.segments[0].line.v.size
    grid = [s.lambda_lo for s in path_obj.segments] + [extent]
    coords = np.array([path_obj.line_at(min(lam, grid[-2])).v
                       for lam in grid])
    for j in range(m):
        ax_v.step(grid, coords[:, j], where="post", label=f"v[{j}]")
    ax_v.axhline(0.0, color="black", linewidth=0.6)
    ax_v.set_xlabel("penalty weight")
    ax_v.set_ylabel("coefficient")
    if m <= 12:
        ax_v.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)


def render_sweep_figure(rows: list[dict], out) -> None:
    """Sparsity and accuracy against the penalty weight, one PNG.

    Plots the nonzero fraction of v on the left axis and, when ground
    truth was available, the discordance on the right axis.
    """
    lams = [row["lam"] for row in rows]
    l0 = [row["l0_fraction"] for row in rows]
    disc = [row.get("discordance") for row in rows]

    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.step(lams, l0, where="post", color="C0", label="nonzero fraction")
    ax.set_xlabel("penalty weight")
    ax.set_ylabel("nonzero fraction of v", color="C0")
    ax.set_ylim(-0.05, 1.05)
    if all(d is not None for d in disc):
        ax2 = ax.twinx()
        ax2.plot(lams, disc, color="C1", marker=".", linestyle="-",
                 label="discordance")
        ax2.set_ylabel("discordance", color="C1")
        ax2.set_ylim(-0.05, 1.05)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
