"""l1-norm best-fit lines through the origin with an l1 sparsity penalty.

The fitted line minimizes the sum of l1-norm residuals of all points plus
a weighted l1 penalty on the direction vector, which makes it robust to
outliers and sparse for large penalty weights.  The whole regularization
path is piecewise constant and computed exactly; an independent
brute-force and dual-certificate oracle can verify every answer.
"""

from .core import (
    DataMatrix,
    DualCertificate,
    FittedLine,
    PathSegment,
    RatioColumn,
    SolutionPath,
    residual_error,
)
from .datagen import gen_line_data, gen_outlier_data
from .fit import degenerate_line, fit_for_pivot, fit_line, solve_column
from .io import (
    CsvParseError,
    read_matrix,
    read_path,
    write_matrix,
    write_path,
    write_sweep,
)
from .oracle import (
    OptimalityRefuted,
    SweepReport,
    brute_force_column,
    brute_force_line,
    brute_force_pivot,
    dual_certificate,
    sweep_validate,
)
from .path import (
    PivotBreakpoints,
    PivotSolutions,
    major_breakpoints,
    merge_path,
    pivot_breakpoints,
    solution_path,
)
from .ratios import EmptyPivotError, build_column, pivot_tableau, window_bounds
from .subspace import SubspaceFit, deflate, discordance, fit_subspace, l0_fraction

__version__ = "0.1.0"

__all__ = [
    "DataMatrix",
    "DualCertificate",
    "FittedLine",
    "PathSegment",
    "RatioColumn",
    "SolutionPath",
    "residual_error",
    "gen_line_data",
    "gen_outlier_data",
    "degenerate_line",
    "fit_for_pivot",
    "fit_line",
    "solve_column",
    "CsvParseError",
    "read_matrix",
    "read_path",
    "write_matrix",
    "write_path",
    "write_sweep",
    "OptimalityRefuted",
    "SweepReport",
    "brute_force_column",
    "brute_force_line",
    "brute_force_pivot",
    "dual_certificate",
    "sweep_validate",
    "PivotBreakpoints",
    "PivotSolutions",
    "major_breakpoints",
    "merge_path",
    "pivot_breakpoints",
    "solution_path",
    "EmptyPivotError",
    "build_column",
    "pivot_tableau",
    "window_bounds",
    "SubspaceFit",
    "deflate",
    "discordance",
    "fit_subspace",
    "l0_fraction",
    "__version__",
]
