"""End-to-end CLI behavior: exit codes, report formats, determinism."""

import json

import pytest
from click.testing import CliRunner

from wittensub.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run(runner, *args):
    return runner.invoke(main, list(args), catch_exceptions=False)


class TestCheckPsi:
    def test_maire_holds(self, runner):
        r = run(
            runner,
            "check-psi", "--phi", "x^3 - x*y^2", "--alpha", "0.5",
            "--box", "1.0", "--samples", "65",
        )
        assert r.exit_code == 0
        report = json.loads(r.output)
        assert report["h1"]["status"] == "holds"
        assert len(report["h1"]["branches"]) == 2

    def test_well_fails_with_witness(self, runner):
        r = run(
            runner,
            "check-psi", "--phi", "1/2*x^2 + 1/2*y^2", "--alpha", "0.5",
            "--samples", "65",
        )
        assert r.exit_code == 2
        report = json.loads(r.output)
        assert report["h1"]["status"] == "fails"
        assert report["h1"]["witness"]["violations"]

    def test_syntax_error_exit_64(self, runner):
        r = run(runner, "check-psi", "--phi", "x^^2")
        assert r.exit_code == 64
        assert "offset" in r.output

    def test_bad_config_exit_64(self, runner):
        r = run(runner, "check-psi", "--phi", "x", "--alpha", "-1")
        assert r.exit_code == 64


class TestQuantities:
    def test_maire_values(self, runner):
        r = run(runner, "quantities", "--phi", "x^3 - x*y^2")
        assert r.exit_code == 0
        report = json.loads(r.output)
        assert report["m1"] == pytest.approx(1.81712, abs=1e-5)
        # exact value 2^(1/3) + 6^(1/3) = 3.077042 (3.07706 when rounded loosely)
        assert report["g"] == pytest.approx(2 ** (1 / 3) + 6 ** (1 / 3), abs=1e-9)
        assert report["finite_type_order"] == 2

    def test_zero_potential(self, runner):
        r = run(runner, "quantities", "--phi", "0")
        report = json.loads(r.output)
        assert report["m1"] == 0.0
        assert report["m2"] == 0.0
        assert report["g"] == 0.0
        assert report["finite_type_order"] is None

    def test_linear_g(self, runner):
        r = run(
            runner,
            "quantities", "--phi", "x", "--lam", "9",
            "--x0", "0.3", "--y0", "-0.2",
        )
        assert json.loads(r.output)["g"] == pytest.approx(9.0)


class TestSweepCommand:
    def test_csv_shape_and_fit_tail(self, runner):
        r = run(
            runner,
            "sweep", "--phi", "x^3 - x*y^2", "--lambda-count", "8",
            "--grid-n", "24",
        )
        assert r.exit_code == 0
        lines = r.output.strip().splitlines()
        assert lines[0] == "lambda,mu_min,n_used,converged,residual"
        data_lines = [ln for ln in lines[1:] if ln and not ln.startswith(("{", " ", "}"))]
        assert len(data_lines) == 8
        fit = json.loads("\n".join(lines[9:]))
        assert "slope" in fit

    def test_zero_potential_flat_slope(self, runner):
        r = run(
            runner,
            "sweep", "--phi", "0", "--lambda-count", "8", "--grid-n", "24",
            "--format", "json",
        )
        assert r.exit_code == 0
        fit = json.loads(r.output)["fit"]
        assert -0.01 <= fit["slope"] <= 0.01

    def test_writes_plot_data_file(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        r = run(
            runner,
            "sweep", "--phi", "0", "--lambda-count", "4", "--grid-n", "16",
            "--out", str(out),
        )
        assert r.exit_code == 0
        dat = (tmp_path / "sweep.csv.dat").read_text().strip().splitlines()
        assert len(dat) == 4
        assert all(len(row.split()) == 2 for row in dat)


class TestCatalogCommand:
    def test_list(self, runner):
        r = run(runner, "catalog", "list")
        assert r.exit_code == 0
        for name in ("maire-l1", "well", "elliptic", "zero"):
            assert name in r.output

    def test_run_well_matches_expectation(self, runner):
        r = run(runner, "catalog", "run", "well", "--skip-sweep")
        assert r.exit_code == 0
        assert "pass" in r.output

    def test_run_maire_h1(self, runner):
        r = run(runner, "catalog", "run", "maire-l1", "--skip-sweep")
        assert r.exit_code == 0

    def test_unknown_name_exit_64(self, runner):
        r = run(runner, "catalog", "run", "no-such")
        assert r.exit_code == 64


class TestReportCommand:
    def test_writes_all_artifacts(self, runner, tmp_path):
        out = tmp_path / "rep"
        r = run(
            runner,
            "report", "--phi", "x^3 - x*y^2", "--lambda-count", "6",
            "--grid-n", "16", "--out", str(out),
        )
        assert r.exit_code == 0
        for suffix in (".csv", ".dat", ".json", ".png"):
            assert (tmp_path / ("rep" + suffix)).exists()


class TestDeterminism:
    def test_check_psi_byte_identical(self, runner):
        args = (
            "check-psi", "--phi", "x^3 - x*y^2", "--samples", "65",
        )
        assert run(runner, *args).output == run(runner, *args).output

    def test_sweep_byte_identical(self, runner):
        args = (
            "sweep", "--phi", "x^3 - x*y^2", "--lambda-count", "5",
            "--grid-n", "24", "--seed", "42",
        )
        assert run(runner, *args).output == run(runner, *args).output

    def test_catalog_verdict_round_trip(self, runner):
        # render -> reparse -> identical serialized verdict
        from wittensub import ENTRIES, parse_poly
        from wittensub import check_h1
        from wittensub.serialize import dumps, verdict_dict
        from fractions import Fraction

        box = (Fraction(1, 2), Fraction(1, 2))
        for entry in ENTRIES:
            phi = entry.poly()
            again = parse_poly(phi.render())
            a = dumps(verdict_dict(check_h1(phi, box, 0.25, 65)))
            b = dumps(verdict_dict(check_h1(again, box, 0.25, 65)))
            assert a == b
