"""Unit tests for the rotorbell command-line front end."""

from __future__ import annotations

import csv
import json
import math
import typing as typ

import pytest

from rotorbell import cli
from rotorbell._validation_helpers import ConfigValidationError, NumericalError
from rotorbell.cli import (
    EXIT_INVALID,
    EXIT_NUMERICAL,
    EXIT_OK,
    Command,
    OutputFormat,
    main,
    parse_config,
)
from rotorbell.rotor_operators import TSIRELSON_BOUND

if typ.TYPE_CHECKING:
    from pathlib import Path

TENTH_PI = "0.3141592653589793"


def _read_rows(path: Path) -> list[list[str]]:
    with path.open(encoding="utf-8", newline="") as stream:
        return list(csv.reader(stream))


class TestParseConfig:
    """Flag parsing, run-file layering and validation."""

    @staticmethod
    def test_defaults() -> None:
        """Only the required flag is needed for a scan."""
        config = parse_config(["scan", "--M", "2"])
        assert config.command is Command.SCAN
        assert config.truncation == 2
        assert config.grid_points == 101
        assert config.output_format is OutputFormat.CSV
        assert str(config.resolved_output) == "scan.csv"

    @staticmethod
    def test_flags_override_run_file(tmp_path: Path) -> None:
        """Explicit flags win; unset flags keep run-file values."""
        path = tmp_path / "run.toml"
        path.write_text("M = 3\ngrid_points = 11\n", encoding="utf-8")
        config = parse_config(["scan", "--M", "5", "--config", str(path)])
        assert config.truncation == 5
        assert config.grid_points == 11

    @staticmethod
    def test_run_file_argument(tmp_path: Path) -> None:
        """A run file can be supplied programmatically."""
        path = tmp_path / "run.toml"
        path.write_text(
            'M_list = [4, 8]\ndelta_theta = 0.3\nformat = "json"\n', encoding="utf-8"
        )
        config = parse_config(["slit"], config_file=path)
        assert config.m_list == (4, 8)
        assert config.output_format is OutputFormat.JSON
        assert str(config.resolved_output) == "slit.json"

    @staticmethod
    def test_list_flags_are_comma_separated() -> None:
        """``--M-list`` and ``--phases`` take comma-separated values."""
        config = parse_config(
            ["equiv", "--M", "3", "--phases", "0.3,0.9,0.1,1.2", "--M-list", "1,2"]
        )
        assert config.phases == (0.3, 0.9, 0.1, 1.2)
        assert config.m_list == (1, 2)

    @staticmethod
    @pytest.mark.parametrize(
        ("argv", "match"),
        [
            (["scan"], "M: required for the scan command"),
            (["scan", "--M", "2", "--grid-points", "1"], "grid_points"),
            (["scan", "--M", "61"], "max_truncation"),
            (["scan", "--M", "40"], "M: 40 exceeds the dense ceiling 31"),
            (["converge", "--M-list", "10,32"], "M_list: 32 exceeds the dense ceiling"),
            (["equiv", "--M", "32", "--phases", "0,0,0,0"], "dense ceiling"),
            (["scan", "--M", "0"], "M must be a positive integer"),
            (["converge", "--M-list", "8,4"], "strictly increasing"),
            (["werner", "--delta-theta", "0"], "delta_theta"),
            (["werner", "--delta-theta", "4"], "delta_theta"),
            (["werner", "--delta-theta", "0.2", "--eta", "1.5"], "eta"),
            (["equiv", "--M", "2", "--phases", "0,1"], "phases"),
            (["scan", "--M", "2", "--log-level", "loud"], "log_level"),
            (["scan", "--M", "2", "--bogus"], "unrecognized"),
            (["sweep"], "invalid choice"),
            (["converge", "--M-list", "a,b"], "comma-separated"),
        ],
    )
    def test_invalid_input(argv: list[str], match: str) -> None:
        """Invalid input raises ConfigValidationError naming the problem."""
        with pytest.raises(ConfigValidationError, match=match):
            parse_config(argv)

    @staticmethod
    def test_unknown_run_file_key(tmp_path: Path) -> None:
        """Keys outside the documented set are refused."""
        path = tmp_path / "run.toml"
        path.write_text("M = 2\ncolour = 1\n", encoding="utf-8")
        with pytest.raises(ConfigValidationError, match="colour: unknown"):
            parse_config(["scan", "--config", str(path)])

    @staticmethod
    def test_raised_ceiling_admits_large_orders() -> None:
        """``--max-truncation`` lifts the order ceiling."""
        config = parse_config(
            ["slit", "--delta-theta", "0.3", "--M-list", "32,64", "--max-truncation=64"]
        )
        assert config.level(64).order == 64

    @staticmethod
    def test_dense_ceiling_spares_analytic_commands() -> None:
        """``slit`` accepts orders beyond the dense ceiling."""
        config = parse_config(["slit", "--delta-theta", "0.3", "--M-list", "31,32"])
        assert config.m_list == (31, 32)

    @staticmethod
    def test_integral_reals_in_run_file_become_floats(tmp_path: Path) -> None:
        """TOML integers given for real-valued keys are read as floats."""
        path = tmp_path / "run.toml"
        path.write_text(
            "delta_theta = 1\neta = 0\nphases = [0, 1, 0, 1]\n", encoding="utf-8"
        )
        config = parse_config(["werner", "--config", str(path)])
        assert isinstance(config.delta_theta, float), (
            f"delta_theta is {type(config.delta_theta).__name__}"
        )
        assert isinstance(config.eta, float), f"eta is {type(config.eta).__name__}"
        assert all(isinstance(phase, float) for phase in config.phases or ()), (
            f"phases are {config.phases!r}"
        )


class TestCommands:
    """End-to-end runs through ``main``."""

    @staticmethod
    def test_scan_writes_full_grid(
        tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """A 41-point scan writes 1681 rows and reports the peak."""
        out = tmp_path / "scan.csv"
        status = main(["scan", "--M", "2", "--grid-points", "41", "--output", str(out)])
        assert status == EXIT_OK
        rows = _read_rows(out)
        assert rows[0] == ["xi_a", "xi_b", "b_max"]
        assert len(rows) == 1 + 41 * 41
        assert all(float(row[2]) <= TSIRELSON_BOUND for row in rows[1:])
        assert "90.00 deg" in capsys.readouterr().out

    @staticmethod
    def test_scan_output_is_reproducible(tmp_path: Path) -> None:
        """Reruns with different worker counts give identical bytes."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        base = ["scan", "--M", "2", "--grid-points", "21"]
        assert main([*base, "--workers", "1", "--output", str(first)]) == EXIT_OK
        assert main([*base, "--workers", "3", "--output", str(second)]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    @staticmethod
    def test_default_output_path(
        tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        """Without ``--output`` the file is named after the command."""
        monkeypatch.chdir(tmp_path)
        assert main(["xblock"]) == EXIT_OK
        rows = _read_rows(tmp_path / "xblock.csv")
        assert rows[0] == ["quantity", "i", "j", "real", "imag"]
        assert len(rows) == 1 + 16 + 4 + 8
        eigenvalues = [float(row[3]) for row in rows if row[0] == "eigenvalue"]
        assert eigenvalues[-1] == pytest.approx(TSIRELSON_BOUND, abs=1e-12)

    @staticmethod
    def test_converge_json(tmp_path: Path) -> None:
        """JSON output carries the full report document."""
        out = tmp_path / "converge.json"
        argv = ["converge", "--M-list", "1,2,3", "--format=json", f"--output={out}"]
        assert main(argv) == EXIT_OK
        document = json.loads(out.read_text(encoding="utf-8"))
        assert document["command"] == "converge"
        assert document["columns"] == ["M", "b_max", "gap_to_2sqrt2"]
        assert [row[0] for row in document["rows"]] == [1, 2, 3]
        assert document["rows"][0][1] == pytest.approx(math.sqrt(2.0), abs=1e-10)
        assert "monotone" in document["summary"]

    @staticmethod
    def test_slit_records(tmp_path: Path) -> None:
        """The slit command tabulates value, analytic value and error per order."""
        out = tmp_path / "slit.csv"
        argv = ["slit", f"--delta-theta={TENTH_PI}", "--M-list=8,16", f"--output={out}"]
        assert main(argv) == EXIT_OK
        rows = _read_rows(out)
        assert rows[0] == ["M", "value", "analytic", "abs_error", "tail_mass"]
        assert [row[0] for row in rows[1:]] == ["8", "16"]
        assert float(rows[1][2]) == pytest.approx(2.736591516352, abs=1e-9)

    @staticmethod
    def test_werner_threshold_and_mixture(tmp_path: Path) -> None:
        """Without ``--eta`` the threshold is written; with it, the expectation."""
        threshold_out = tmp_path / "threshold.csv"
        mixture_out = tmp_path / "mixture.csv"
        assert (
            main(["werner", "--delta-theta", "0.2", "--output", str(threshold_out)])
            == EXIT_OK
        )
        assert (
            main([
                "werner",
                "--delta-theta",
                TENTH_PI,
                "--eta",
                "0.1",
                "--output",
                str(mixture_out),
            ])
            == EXIT_OK
        )
        threshold = _read_rows(threshold_out)
        assert threshold[0] == ["delta_theta", "eta_star"]
        assert float(threshold[1][1]) == pytest.approx(0.283389222091, abs=1e-9)
        mixture = _read_rows(mixture_out)
        assert mixture[0] == ["eta", "expectation"]
        assert float(mixture[1][1]) == pytest.approx(2.462932364717, abs=1e-9)

    @staticmethod
    def test_werner_writes_integral_reals_as_reals(tmp_path: Path) -> None:
        """Integral ``delta_theta`` and ``eta`` from a run file stay real."""
        mixture_file = tmp_path / "mixture.toml"
        mixture_file.write_text("delta_theta = 1\neta = 0\n", encoding="utf-8")
        threshold_file = tmp_path / "threshold.toml"
        threshold_file.write_text(
            'delta_theta = 1\nformat = "json"\n', encoding="utf-8"
        )
        mixture_out = tmp_path / "mixture.csv"
        threshold_out = tmp_path / "threshold.json"
        runs = ((mixture_file, mixture_out), (threshold_file, threshold_out))
        for run_file, out in runs:
            argv = ["werner", "--config", str(run_file), "--output", str(out)]
            assert main(argv) == EXIT_OK, f"werner failed for {run_file.name}"
        mixture = _read_rows(mixture_out)
        assert mixture[1][0] == "0.0000000000000000", f"eta cell {mixture[1][0]!r}"
        text = threshold_out.read_text(encoding="utf-8")
        assert "    [1.0000000000000000, " in text, f"unexpected rows in {text}"
        row = json.loads(text)["rows"][0]
        assert all(isinstance(cell, float) for cell in row), f"row {row!r}"

    @staticmethod
    def test_equiv_single_column(tmp_path: Path) -> None:
        """The equivalence check writes one deviation value."""
        out = tmp_path / "equiv.csv"
        argv = ["equiv", "--M", "3", "--phases", "0.3,0.9,0.1,1.2", f"--output={out}"]
        assert main(argv) == EXIT_OK
        rows = _read_rows(out)
        assert rows[0] == ["max_spectral_deviation"]
        assert float(rows[1][0]) < 1e-9


class TestExitStatus:
    """Failures map to documented exit codes."""

    @staticmethod
    def test_invalid_flags_exit_two(capsys: pytest.CaptureFixture[str]) -> None:
        """Validation failures exit 2 with a message on stderr."""
        assert main(["scan", "--M", "2", "--grid-points", "1"]) == EXIT_INVALID
        assert capsys.readouterr().err.startswith("rotorbell: grid_points")

    @staticmethod
    def test_dense_ceiling_exits_two_at_parse_time(
        tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """Orders above the dense ceiling are refused before any work starts."""
        out = tmp_path / "big.csv"
        argv = ["converge", "--M-list", "30,40", "--output", str(out)]
        assert main(argv) == EXIT_INVALID
        assert capsys.readouterr().err.startswith("rotorbell: M_list: 40")
        assert not out.exists()

    @staticmethod
    def test_unwritable_output_exits_two(
        tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        """A missing output directory is an input error naming the writer."""
        out = tmp_path / "missing" / "x.csv"
        assert main(["xblock", "--output", str(out)]) == EXIT_INVALID
        assert capsys.readouterr().err.startswith("rotorbell.output:")

    @staticmethod
    def test_numerical_failure_exits_three(
        tmp_path: Path,
        monkeypatch: pytest.MonkeyPatch,
        capsys: pytest.CaptureFixture[str],
    ) -> None:
        """Numerical failures exit 3."""

        def failing(*_args: object, **_kwargs: object) -> typ.NoReturn:
            msg = "eigensolver diverged"
            raise NumericalError(msg)

        monkeypatch.setattr(cli, "max_eigenvalue_surface", failing)
        argv = ["scan", "--M", "2", "--output", str(tmp_path / "s.csv")]
        assert main(argv) == EXIT_NUMERICAL
        assert "eigensolver diverged" in capsys.readouterr().err
