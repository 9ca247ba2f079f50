"""
Unit tests for the command-line interface.
"""

import csv
import json

import pytest

from affine_lab.cli import EXIT_PASS, EXIT_USAGE, build_parser, main, scan_thetas


def _run(tmp_path, *argv, name="out"):
    out = tmp_path / name
    code = main(list(argv) + ["--out", str(out), "-q"])
    return code, out


def _rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


class TestParser:
    """Test cases for argument parsing."""

    def test_no_command(self, capsys):
        """Without a subcommand the help is printed."""
        assert main([]) == EXIT_USAGE
        assert "Examples:" in capsys.readouterr().out

    def test_unknown_theorem(self):
        """Theorem labels are restricted."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["verify", "--theorem", "7.3"])

    def test_counterexample_defaults(self):
        """Slab and power defaults are set."""
        args = build_parser().parse_args(["counterexample", "section3"])
        assert args.gamma == 0.205
        assert args.lam == 0.5
        assert args.alpha_exp == 0.75


class TestScanGrid:
    """Test cases for scan_thetas."""

    def test_open_grid(self):
        """Both ends are excluded."""
        thetas = scan_thetas("10.1", 4, 0.5, 0.75, 0.01)
        assert len(thetas) == 24
        assert thetas[0] == pytest.approx(0.51)
        assert thetas[-1] == pytest.approx(0.74)

    def test_default_range(self):
        """Missing ends come from the theorem's range."""
        thetas = scan_thetas("8.1", 3, None, None, 0.1)
        assert thetas == pytest.approx([0.1, 0.2, 0.3, 0.4])

    def test_point_theorem(self):
        """A theorem pinned to one theta scans that theta."""
        assert scan_thetas("9.1", 3, None, None, 0.01) == pytest.approx([2 / 3])


class TestVerify:
    """Test cases for the verify command."""

    def test_passes(self, tmp_path):
        """An admissible solution clears the residual gate."""
        code, out = _run(tmp_path, "verify", "--theorem", "10.2", "--N", "3", "--theta", "0.6")
        assert code == EXIT_PASS
        doc = json.loads((out / "verify.json").read_text())
        assert doc["passed"] is True
        assert doc["bundle"]["max_residual"] <= 1e-7
        assert len(_rows(out / "verify.csv")) == 100

    def test_theta_out_of_range(self, tmp_path):
        """8.1 needs theta in (0, 1/2)."""
        code, _ = _run(tmp_path, "verify", "--theorem", "8.1", "--theta", "0.6")
        assert code == EXIT_USAGE

    def test_missing_family(self, tmp_path):
        """Either a theorem or a family document is needed."""
        code, _ = _run(tmp_path, "verify", "--theta", "0.3")
        assert code == EXIT_USAGE

    def test_missing_config(self, tmp_path):
        """A missing configuration file is a usage error."""
        code, _ = _run(tmp_path, "verify", "-c", str(tmp_path / "none.yml"))
        assert code == EXIT_USAGE

    def test_worker_invariance(self, tmp_path):
        """Outputs are byte-identical across worker counts."""
        argv = ["verify", "--theorem", "8.2", "--N", "3", "--theta", "0.2", "--grid", "30"]
        code1, one = _run(tmp_path, *argv, "--workers", "1", name="one")
        code4, four = _run(tmp_path, *argv, "--workers", "4", name="four")
        assert code1 == code4 == EXIT_PASS
        for name in ("verify.csv", "verify.json"):
            assert (one / name).read_bytes() == (four / name).read_bytes()

    def test_tw_instance(self, tmp_path):
        """The n = 9 variant verifies phi = r^9, eta = 1/t at theta = 11/12."""
        argv = ["verify", "--theorem", "9.1", "--N", "10", "--variant", "tw-paper"]
        code, out = _run(tmp_path, *argv)
        assert code == EXIT_PASS
        bundle = json.loads((out / "verify.json").read_text())["bundle"]
        assert bundle["theta"] == pytest.approx(11 / 12)
        assert bundle["family"]["family"] == "trudinger-wang"

    def test_unknown_variant(self, tmp_path):
        """A misspelled variant is a usage error, not the default family."""
        code, out = _run(tmp_path, "verify", "--theorem", "9.1", "--N", "10", "--variant", "bogus")
        assert code == EXIT_USAGE
        assert not (out / "verify.json").exists()

    def test_config_file(self, tmp_path, config_file):
        """Settings come from the configuration file."""
        path = config_file('theorem: "8.1"\nN: 2\ntheta: 0.25\ngrid:\n  samples: 12\n')
        code, out = _run(tmp_path, "verify", "-c", path, "--format", "markdown")
        assert code == EXIT_PASS
        assert (out / "verify.md").exists()
        assert not (out / "verify.csv").exists()


class TestScan:
    """Test cases for the scan command."""

    def test_rows(self, tmp_path):
        """Theorem 10.1 in N=4 over (1/2, 3/4) gives 24 passing rows."""
        code, out = _run(
            tmp_path, "scan", "--theorem", "10.1", "--N", "4",
            "--start", "0.5", "--stop", "0.75", "--step", "0.01", "--grid", "10",
        )
        assert code == EXIT_PASS
        rows = _rows(out / "scan-10.1.csv")
        assert len(rows) == 24
        assert all(row["passed"] == "True" for row in rows)

    def test_exponent_column(self, tmp_path):
        """8.1 rows carry the exponent 2 - 1/theta."""
        code, out = _run(
            tmp_path, "scan", "--theorem", "8.1", "--N", "2", "--step", "0.1", "--grid", "5"
        )
        assert code == EXIT_PASS
        rows = _rows(out / "scan-8.1.csv")
        assert float(rows[0]["exponent"]) == pytest.approx(2 - 1 / 0.1)

    def test_unknown_variant(self, tmp_path):
        """Branch selection rejects variants 9.1 does not have."""
        code, _ = _run(tmp_path, "scan", "--theorem", "9.1", "--N", "3", "--variant", "bogus")
        assert code == EXIT_USAGE

    def test_no_admissible_theta(self, tmp_path):
        """A grid outside the range is rejected."""
        code, _ = _run(
            tmp_path, "scan", "--theorem", "8.1", "--N", "2",
            "--start", "0.6", "--stop", "0.9", "--step", "0.1",
        )
        assert code == EXIT_USAGE


class TestSolveAlpha:
    """Test cases for the solve-alpha command."""

    def test_full(self, tmp_path):
        """theta = 0.6 in N = 3 gives alpha = (1, 1, 1)."""
        code, out = _run(tmp_path, "solve-alpha", "--theta", "0.6", "--N", "3")
        assert code == EXIT_PASS
        doc = json.loads((out / "solve-alpha-full.json").read_text())
        assert doc["bundle"]["alpha"] == pytest.approx([1.0, 1.0, 1.0])
        assert doc["bundle"]["theta_roundtrip"] == pytest.approx(0.6, abs=1e-10)

    def test_needs_theta(self, tmp_path):
        """theta is required."""
        code, _ = _run(tmp_path, "solve-alpha", "--N", "3")
        assert code == EXIT_USAGE


class TestMeasure:
    """Test cases for the measure command."""

    def test_doubling_default_family(self, tmp_path):
        """|x|^2 has doubling ratio sigma^-N."""
        code, out = _run(
            tmp_path, "measure", "doubling", "--N", "2", "--sigma", "0.5", "--resolution", "64"
        )
        assert code == EXIT_PASS
        row = _rows(out / "measure-doubling.csv")[0]
        assert float(row["ratio"]) == pytest.approx(4.0, rel=1e-8)

    def test_halving(self, tmp_path):
        """The halving exponent of |x|^2 is 2."""
        code, out = _run(tmp_path, "measure", "halving", "--N", "2", "--levels", "3")
        assert code == EXIT_PASS
        doc = json.loads((out / "measure-halving.json").read_text())
        assert doc["bundle"]["exponent"] == pytest.approx(2.0)


class TestInequality:
    """Test cases for the inequality command."""

    def test_lemma42(self, tmp_path):
        """The explicit lemma holds and is stable on the normalized corpus."""
        code, out = _run(tmp_path, "inequality", "lemma42")
        assert code == EXIT_PASS
        doc = json.loads((out / "inequality-lemma42.json").read_text())
        assert doc["bundle"]["corpus"] == "default"
        assert doc["bundle"]["implied_constant"] > 0

    def test_option_not_accepted(self, tmp_path):
        """Options a check does not take are rejected."""
        code, _ = _run(tmp_path, "inequality", "lemma42", "--sigma", "0.5")
        assert code == EXIT_USAGE

    def test_wrong_corpus(self, tmp_path):
        """Normalized lemmas on the zero-boundary corpus violate a precondition."""
        code, _ = _run(tmp_path, "inequality", "lemma42", "--corpus", "standard")
        assert code == EXIT_USAGE
