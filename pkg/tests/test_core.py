import math

import numpy as np
import pytest

from l1line import (
    DataMatrix,
    FittedLine,
    PathSegment,
    SolutionPath,
    residual_error,
)


class TestDataMatrix:
    def test_shape_and_accessors(self, toy):
        assert (toy.n, toy.m) == (5, 4)
        assert toy.values.dtype == np.float64

    def test_values_are_readonly(self, toy):
        with pytest.raises(ValueError):
            toy.values[0, 0] = 99.0

    def test_rejects_1d(self):
        with pytest.raises(ValueError, match="2-d"):
            DataMatrix(np.ones(4))

    def test_rejects_single_column(self):
        with pytest.raises(ValueError, match="two features"):
            DataMatrix(np.ones((3, 1)))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            DataMatrix(np.empty((0, 3)))

    def test_nonfinite_reports_location(self):
        X = np.ones((3, 3))
        X[1, 2] = np.nan
        with pytest.raises(ValueError, match="row 1, column 2"):
            DataMatrix(X)
        X[1, 2] = np.inf
        with pytest.raises(ValueError, match="row 1, column 2"):
            DataMatrix(X)

    def test_column_names_length_checked(self):
        with pytest.raises(ValueError, match="column names"):
            DataMatrix(np.ones((2, 3)), column_names=("a", "b"))

    def test_column_names_kept(self):
        d = DataMatrix(np.ones((2, 2)), column_names=("a", "b"))
        assert d.column_names == ("a", "b")


class TestResidualError:
    def test_single_axis_direction(self, toy):
        # v = e1 leaves every other column untouched: total mass minus
        # the first column's mass, 58 - 17
        v = np.array([1.0, 0.0, 0.0, 0.0])
        assert residual_error(toy, v, 0) == 41.0

    def test_known_direction(self, toy):
        v = np.array([1.0, -0.5, 2.0 / 5.0, -1.0])
        assert residual_error(toy, v, 0) == pytest.approx(36.1, rel=1e-12)

    def test_zero_direction_gives_total_mass(self, toy):
        assert residual_error(toy, np.zeros(4), 2) == 58.0

    def test_bad_preserved_index(self, toy):
        with pytest.raises(IndexError):
            residual_error(toy, np.zeros(4), 4)

    def test_bad_shape(self, toy):
        with pytest.raises(ValueError):
            residual_error(toy, np.zeros(3), 0)


class TestFittedLine:
    def test_build_fills_objective(self, toy):
        v = np.array([1.0, 0.0, 0.0, -0.2])
        line = FittedLine.build(toy, v, 0, 2.0)
        assert line.error == pytest.approx(38.8, rel=1e-12)
        assert line.penalty_norm == pytest.approx(1.2, rel=1e-12)
        assert line.objective == pytest.approx(38.8 + 2.0 * 1.2, rel=1e-12)
        assert line.objective_at(0.0) == line.error

    def test_v_frozen(self, toy):
        line = FittedLine.build(toy, np.array([1.0, 0, 0, 0]), 0, 0.0)
        with pytest.raises(ValueError):
            line.v[1] = 5.0

    def test_preserved_entry_must_be_one(self):
        with pytest.raises(ValueError, match="preserved"):
            FittedLine(v=np.array([2.0, 1.0]), preserved=0, lam=0.0,
                       error=1.0, penalty_norm=3.0, objective=1.0)

    def test_all_zero_direction_allowed(self):
        line = FittedLine(v=np.zeros(3), preserved=1, lam=4.0, error=9.0,
                          penalty_norm=0.0, objective=9.0)
        assert line.objective_at(100.0) == 9.0

    def test_negative_lam_rejected(self):
        with pytest.raises(ValueError, match="lam"):
            FittedLine(v=np.array([1.0, 0.0]), preserved=0, lam=-1.0,
                       error=0.0, penalty_norm=1.0, objective=-1.0)

    def test_inconsistent_objective_rejected(self):
        with pytest.raises(ValueError, match="objective"):
            FittedLine(v=np.array([1.0, 0.0]), preserved=0, lam=1.0,
                       error=2.0, penalty_norm=1.0, objective=99.0)


def _segment(lo, hi, line):
    return PathSegment(lambda_lo=lo, lambda_hi=hi, line=line,
                       z_lo=line.objective_at(lo),
                       z_hi=line.objective_at(hi) if math.isfinite(hi)
                       else math.inf)


def _line(data, v, piv, lam):
    return FittedLine.build(data, np.asarray(v, float), piv, lam)


class TestSolutionPath:
    def test_segment_lookup_is_half_open(self, toy):
        a = _line(toy, [1.0, 0, 0, -0.2], 0, 0.0)
        b = _line(toy, [1.0, 0, 0, 0], 0, 11.0)
        path = SolutionPath((_segment(0.0, 11.0, a),
                             _segment(11.0, math.inf, b)))
        assert path.segment_at(0.0) is path.segments[0]
        assert path.segment_at(10.999999) is path.segments[0]
        # a weight sitting exactly on the boundary belongs to the right
        assert path.segment_at(11.0) is path.segments[1]
        assert path.line_at(50.0) is b

    def test_negative_weight_rejected(self, toy):
        path = SolutionPath((_segment(
            0.0, math.inf, _line(toy, [1.0, 0, 0, 0], 0, 0.0)),))
        with pytest.raises(ValueError):
            path.segment_at(-0.1)

    def test_breakpoints_exclude_endpoints(self, toy):
        a = _line(toy, [1.0, 0, 0, -0.2], 0, 0.0)
        b = _line(toy, [1.0, 0, 0, 0], 0, 11.0)
        path = SolutionPath((_segment(0.0, 11.0, a),
                             _segment(11.0, math.inf, b)))
        assert path.breakpoints == [11.0]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            SolutionPath(())

    def test_invariants_catch_gap(self, toy):
        a = _line(toy, [1.0, 0, 0, -0.2], 0, 0.0)
        b = _line(toy, [1.0, 0, 0, 0], 0, 11.0)
        path = SolutionPath((_segment(0.0, 10.0, a),
                             _segment(11.0, math.inf, b)))
        with pytest.raises(ValueError, match="gap"):
            path.check_invariants()

    def test_invariants_catch_objective_jump(self, toy):
        a = _line(toy, [1.0, 0, 0, -0.2], 0, 0.0)
        b = _line(toy, [0.0, 0, 0, 1.0], 3, 5.0)  # unrelated line
        path = SolutionPath((_segment(0.0, 5.0, a),
                             _segment(5.0, math.inf, b)))
        with pytest.raises(ValueError, match="jump"):
            path.check_invariants()

    def test_invariants_catch_growing_penalty(self, toy):
        # objectives agree at the 11.0 boundary, so only the nonincreasing
        # penalty rule can reject this ordering
        a = _line(toy, [1.0, 0, 0, 0], 0, 0.0)
        b = _line(toy, [1.0, 0, 0, -0.2], 0, 11.0)
        segs = (_segment(0.0, 11.0, a),
                PathSegment(lambda_lo=11.0, lambda_hi=math.inf, line=b,
                            z_lo=b.objective_at(11.0), z_hi=math.inf))
        with pytest.raises(ValueError, match="penalty"):
            SolutionPath(segs).check_invariants()

    def test_invariants_require_terminal_infinity(self, toy):
        a = _line(toy, [1.0, 0, 0, 0], 0, 0.0)
        with pytest.raises(ValueError, match="infinity"):
            SolutionPath((_segment(0.0, 5.0, a),)).check_invariants()
