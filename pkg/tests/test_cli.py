import io
import json
import math
import re

import pytest

from sphladder import cli
from sphladder import measures as meas
from sphladder.quadrature import AccuracyError

FLOAT17 = re.compile(r"^-?\d\.\d{16}e[+-]\d{2,3}$")


def run_cli(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestFormatting:
    def test_seventeen_significant_digits(self):
        assert cli.fmt_float(math.sqrt(3) / 2) == "8.6602540378443860e-01"
        assert FLOAT17.match(cli.fmt_float(-1.25e-300))

    def test_json_emitter_is_valid_json(self):
        payload = {"a": [1.0, None, True], "b": {"c": "x\"y"}, "d": 3}
        parsed = json.loads(cli.emit_json(payload))
        assert parsed["b"]["c"] == 'x"y'
        assert parsed["a"][0] == 1.0

    def test_csv_newlines_and_empty_cells(self):
        text = cli.emit_csv(["a", "b"], [[1, None], [2.5, "x"]])
        assert text == "a,b\n1,\n2.5000000000000000e+00,x\n"


class TestLegendreCommand:
    def test_csv_value(self, capsys):
        code, out, _ = run_cli(
            ["legendre", "--N", "1", "--m", "1", "--x", "0"], capsys)
        assert code == 0
        header, row = out.strip().split("\n")
        assert header == "N,m,x,phi,mantissa,exp10,value"
        cells = row.split(",")
        assert cells[0] == "1" and cells[1] == "1"
        assert float(cells[6]) == pytest.approx(math.sqrt(3) / 2, rel=1e-14)

    def test_json_mode_value(self, capsys):
        code, out, _ = run_cli(
            ["legendre", "--N", "1", "--m", "0", "--x", "1",
             "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["value"] == pytest.approx(1.224744871391589, rel=1e-14)

    def test_phi_gives_latitude_mode(self, capsys):
        code, out, _ = run_cli(
            ["legendre", "--N", "1", "--m", "1", "--phi", str(math.pi / 2),
             "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["value"] == pytest.approx(math.sqrt(3) / 2, rel=1e-13)

    def test_order_exceeding_degree_fails_validation(self, capsys):
        code, out, err = run_cli(
            ["legendre", "--N", "5", "--m", "6", "--x", "0"], capsys)
        assert code == 2
        assert "order exceeds degree" in err

    def test_underflowing_value_reports_scaled_form(self, capsys):
        code, out, _ = run_cli(
            ["legendre", "--N", "4000", "--m", "3500", "--x", "-0.8660254",
             "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["value"] is None
        assert rec["exp10"] < -320
        assert rec["mantissa"] != 0.0


class TestScanCommand:
    ARGS = ["scan", "--m0", "1", "--N0", "1",
            "--k", "31", "--k", "63", "--k", "127", "--k", "255"]

    def test_csv_schema(self, capsys):
        code, out, _ = run_cli(self.ARGS + ["--phi", "1.9"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "k,N,m,h,phi,exact,wkb,airy,err_wkb,err_airy"
        assert len(lines) == 5
        first = lines[1].split(",")
        assert first[0] == "31"
        assert FLOAT17.match(first[3])
        assert first[7] == "" and first[9] == ""  # airy absent at phi=1.9

    def test_json_fitted_orders(self, capsys):
        code, out, _ = run_cli(self.ARGS + ["--phi", "1.9",
                                            "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert 0.8 <= rec["fitted_order_wkb"] <= 1.3
        assert rec["fitted_order_airy"] is None

    def test_caustic_grid_orders(self, capsys):
        code, out, _ = run_cli(self.ARGS + ["--caustic", "4",
                                            "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["fitted_order_airy"] >= 0.2

    def test_single_member_null_fit(self, capsys):
        code, out, _ = run_cli(
            ["scan", "--m0", "1", "--N0", "1", "--k", "63",
             "--phi", "1.9", "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["fitted_order_wkb"] is None
        assert len(rec["rows"]) == 1

    def test_descending_k_rejected(self, capsys):
        code, _, err = run_cli(
            ["scan", "--m0", "1", "--N0", "1", "--k", "63", "--k", "31",
             "--phi", "1.9"], capsys)
        assert code == 2
        assert "ascending" in err

    def test_rows_sorted_by_k_then_phi(self, capsys):
        code, out, _ = run_cli(
            self.ARGS + ["--phi", "2.0", "--phi", "1.2", "--format", "json"],
            capsys)
        assert code == 0
        rec = json.loads(out)
        keys = [(r["k"], r["phi"]) for r in rec["rows"]]
        assert keys == sorted(keys)

    def test_byte_determinism(self, capsys):
        _, out1, _ = run_cli(self.ARGS + ["--caustic", "3"], capsys)
        _, out2, _ = run_cli(self.ARGS + ["--caustic", "3"], capsys)
        assert out1 == out2


class TestMeasureCommand:
    def test_constant_function_row(self, capsys):
        code, out, _ = run_cli(
            ["measure", "--N", "500", "--c0", "0.8", "--f", "one"], capsys)
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "N,f_or_s,empirical,limit,gap"
        cells = lines[1].split(",")
        assert cells[1] == "f=one"
        assert float(cells[2]) == pytest.approx(1.0, abs=1e-10)
        assert float(cells[4]) <= 1e-10

    def test_second_moment_sweep(self, capsys):
        code, out, _ = run_cli(
            ["measure", "--N", "500", "--N", "1000", "--c0", "0.8",
             "--f", "t2", "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["rows"][0]["limit"] == pytest.approx(0.32, abs=1e-10)
        assert rec["trends"]["f=t2"]["decreasing"] is True

    def test_char_fn_rows(self, capsys):
        code, out, _ = run_cli(
            ["measure", "--N", "500", "--c0", "0.8", "--s", "5",
             "--format", "json"], capsys)
        assert code == 0
        rec = json.loads(out)
        row = rec["rows"][0]
        assert row["gap"] <= 1e-9

    def test_requires_a_target(self, capsys):
        code, _, err = run_cli(["measure", "--N", "100", "--c0", "0.8"],
                               capsys)
        assert code == 2

    def test_invalid_c0(self, capsys):
        code, _, _ = run_cli(["measure", "--N", "100", "--c0", "1.5",
                              "--f", "one"], capsys)
        assert code == 2

    def test_accuracy_failure_maps_to_exit_3(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise AccuracyError("no convergence", estimate=0.0,
                                error_bound=1.0)
        monkeypatch.setattr(meas, "arcsine_limit", boom)
        monkeypatch.setattr(cli.meas, "arcsine_limit", boom)
        code, _, err = run_cli(["measure", "--N", "100", "--c0", "0.8",
                                "--f", "one"], capsys)
        assert code == 3
        assert "numerical failure" in err


class TestSelftestCommand:
    def test_fresh_build_passes(self, capsys):
        code, out, _ = run_cli(["selftest"], capsys)
        assert code == 0
        rec = json.loads(out)
        assert rec["all_passed"] is True
        assert all(c["passed"] for c in rec["checks"])

    def test_corruption_hook_fails_orthonormality(self, capsys):
        code, out, _ = run_cli(["selftest", "--corrupt-recurrence"], capsys)
        assert code == 1
        rec = json.loads(out)
        failed = {c["name"] for c in rec["checks"] if not c["passed"]}
        assert "legendre_orthonormality" in failed

    def test_byte_determinism(self, capsys):
        _, out1, _ = run_cli(["selftest"], capsys)
        _, out2, _ = run_cli(["selftest"], capsys)
        assert out1 == out2


class TestOutputFile:
    def test_out_flag_writes_file(self, tmp_path, capsys):
        target = tmp_path / "row.csv"
        code, out, _ = run_cli(
            ["legendre", "--N", "2", "--m", "0", "--x", "0.5",
             "--out", str(target)], capsys)
        assert code == 0
        assert out == ""
        text = target.read_text()
        assert text.startswith("N,m,x,phi,")
        assert text.endswith("\n")
