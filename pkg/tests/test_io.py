import csv
import json
import math

import numpy as np
import pytest

from l1line import (
    CsvParseError,
    DataMatrix,
    read_matrix,
    read_path,
    solution_path,
    write_matrix,
    write_path,
    write_sweep,
)
from l1line.io import SWEEP_FIELDS


class TestMatrixRoundTrip:
    def test_exact_float_round_trip(self, toy, tmp_path):
        f = tmp_path / "m.csv"
        write_matrix(toy, f)
        back = read_matrix(f)
        assert back.values.tobytes() == toy.values.tobytes()
        assert back.column_names is None

    def test_awkward_floats_survive(self, tmp_path):
        X = np.array([[0.1, 1e-300], [-2.0 / 3.0, 12345678901234.5]])
        f = tmp_path / "m.csv"
        write_matrix(DataMatrix(X), f)
        assert read_matrix(f).values.tobytes() == X.tobytes()

    def test_header_round_trip(self, tmp_path):
        data = DataMatrix(np.array([[1.0, 2.0]]), column_names=("u", "w"))
        f = tmp_path / "m.csv"
        write_matrix(data, f, header=True)
        back = read_matrix(f, has_header=True)
        assert back.column_names == ("u", "w")
        assert back.values.tolist() == [[1.0, 2.0]]

    def test_default_header_names(self, tmp_path, toy):
        f = tmp_path / "m.csv"
        write_matrix(toy, f, header=True)
        assert read_matrix(f, has_header=True).column_names == (
            "x1", "x2", "x3", "x4")

    def test_blank_lines_skipped(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("\n1,2\n\n   \n3,4\n\n")
        assert read_matrix(f).values.tolist() == [[1.0, 2.0], [3.0, 4.0]]


class TestMatrixErrors:
    def test_ragged_row_reports_line(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("1,2,3\n4,5\n")
        with pytest.raises(CsvParseError) as err:
            read_matrix(f)
        assert err.value.row == 2
        assert "row 2" in str(err.value)

    def test_non_numeric_cell_reports_location(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("1,2\n3,oops\n")
        with pytest.raises(CsvParseError) as err:
            read_matrix(f)
        assert (err.value.row, err.value.column) == (2, 2)
        assert "'oops'" in str(err.value)

    def test_nan_and_inf_rejected(self, tmp_path):
        for bad in ("nan", "inf", "-inf"):
            f = tmp_path / "m.csv"
            f.write_text(f"1,{bad}\n")
            with pytest.raises(CsvParseError) as err:
                read_matrix(f)
            assert err.value.column == 2

    def test_empty_file(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("")
        with pytest.raises(CsvParseError):
            read_matrix(f)
        with pytest.raises(CsvParseError):
            read_matrix(f, has_header=True)

    def test_header_only_file(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("a,b\n")
        with pytest.raises(CsvParseError):
            read_matrix(f, has_header=True)

    def test_header_width_mismatch(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("a,b,c\n1,2\n")
        with pytest.raises(CsvParseError):
            read_matrix(f, has_header=True)

    def test_blank_line_row_numbers_stay_physical(self, tmp_path):
        f = tmp_path / "m.csv"
        f.write_text("1,2\n\nbad,3\n")
        with pytest.raises(CsvParseError) as err:
            read_matrix(f)
        assert err.value.row == 3


class TestPathFiles:
    def test_round_trip_preserves_every_field(self, toy, tmp_path):
        path = solution_path(toy)
        f = tmp_path / "path.json"
        write_path(path, f)
        back = read_path(f)
        assert len(back.segments) == len(path.segments)
        for a, b in zip(path.segments, back.segments):
            assert b.lambda_lo == a.lambda_lo
            assert b.lambda_hi == a.lambda_hi
            assert b.z_lo == a.z_lo
            assert b.z_hi == a.z_hi
            assert b.line.v.tobytes() == a.line.v.tobytes()
            assert b.line.preserved == a.line.preserved
            assert b.line.error == a.line.error
            assert b.line.penalty_norm == a.line.penalty_norm
        back.check_invariants()

    def test_file_is_a_json_array_with_null_endpoints(self, toy, tmp_path):
        f = tmp_path / "path.json"
        write_path(solution_path(toy), f)
        payload = json.loads(f.read_text())
        assert isinstance(payload, list)
        assert list(payload[0]) == ["lambda_lo", "lambda_hi", "preserved",
                                    "v", "error", "penalty_norm", "z_lo",
                                    "z_hi"]
        assert payload[-1]["lambda_hi"] is None
        assert payload[-1]["z_hi"] is None
        assert payload[0]["lambda_hi"] == 3.0
        assert f.read_text().endswith("\n")

    def test_write_is_deterministic(self, toy, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        write_path(solution_path(toy), a)
        write_path(solution_path(toy), b)
        assert a.read_bytes() == b.read_bytes()


class TestSweepFiles:
    def test_rows_and_header(self, tmp_path):
        rows = [
            {"lam": 0.0, "preserved": 3, "error": 34.5, "penalty_norm": 2.5,
             "objective": 34.5, "l0_fraction": 1.0, "discordance": 0.25},
            {"lam": 1.5, "preserved": 0, "error": 38.8, "penalty_norm": 1.2,
             "objective": 40.6, "l0_fraction": 0.5, "discordance": None},
        ]
        f = tmp_path / "sweep.csv"
        write_sweep(rows, f)
        with open(f, newline="") as fh:
            got = list(csv.reader(fh))
        assert got[0] == list(SWEEP_FIELDS)
        assert got[1] == ["0.0", "3", "34.5", "2.5", "34.5", "1.0", "0.25"]
        assert got[2][-1] == ""  # no ground truth, blank cell
        assert float(got[2][0]) == 1.5

    def test_missing_key_treated_as_blank(self, tmp_path):
        f = tmp_path / "sweep.csv"
        write_sweep([{"lam": 2.0, "preserved": 1, "error": 3.0,
                      "penalty_norm": 1.0, "objective": 5.0,
                      "l0_fraction": 0.5}], f)
        with open(f, newline="") as fh:
            got = list(csv.reader(fh))
        assert got[1][-1] == ""

    def test_floats_round_trip_through_text(self, tmp_path):
        lam = 3.4999999999999982
        f = tmp_path / "sweep.csv"
        write_sweep([{"lam": lam, "preserved": 0, "error": 38.8,
                      "penalty_norm": 1.2, "objective": 38.8 + lam * 1.2,
                      "l0_fraction": 0.5, "discordance": None}], f)
        with open(f, newline="") as fh:
            got = list(csv.reader(fh))
        assert float(got[1][0]) == lam
