import numpy as np

from l1line import DataMatrix, solution_path
from l1line.plots import render_path_figure, render_sweep_figure


def test_path_figure_renders(toy, tmp_path):
    out = tmp_path / "path.png"
    render_path_figure(solution_path(toy), out)
    assert out.stat().st_size > 0
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_path_figure_without_legend(tmp_path):
    # 13 columns crosses the legend cutoff
    rng = np.random.default_rng(0)
    data = DataMatrix(rng.normal(size=(6, 13)))
    out = tmp_path / "wide.png"
    render_path_figure(solution_path(data), out)
    assert out.stat().st_size > 0


def test_sweep_figure_with_and_without_truth(tmp_path):
    base = {"preserved": 0, "error": 1.0, "penalty_norm": 1.0,
            "objective": 1.0}
    with_truth = [dict(base, lam=float(k), l0_fraction=1.0 - 0.2 * k,
                       discordance=0.1 * k) for k in range(4)]
    without = [dict(row, discordance=None) for row in with_truth]
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    render_sweep_figure(with_truth, a)
    render_sweep_figure(without, b)
    assert a.stat().st_size > 0
    assert b.stat().st_size > 0
