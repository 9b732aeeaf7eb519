"""Tests for the command-line entry point."""

import csv
import json
import logging

import pytest

from schmidtbec import __version__
from schmidtbec.__main__ import (
    EXIT_CONFIG,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_UNEXPECTED,
    build_parser,
    main,
)
from schmidtbec.bench.commands import SCALES_COLUMNS
from schmidtbec.core.config import MemoryBudgetError
from schmidtbec.core.errors import ConvergenceError
from schmidtbec.solver.field_io import FieldCheck


@pytest.fixture
def run_file(tmp_path):
    """Small formula-only run at 350 Hz."""
    path = tmp_path / "run.json"
    path.write_text(json.dumps({
        "sweep": {"atom_numbers": [100.0, 1000.0]},
        "methods": {"enabled": ["formula-first-order"]},
    }))
    return path


def _argv(config_dir, *rest):
    return ["--config-dir", str(config_dir), "--log-level", "ERROR", *rest]


class TestParser:

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_ground_state_needs_atom_number(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["ground-state"])


class TestCommands:

    def test_scales_prints_and_writes(self, temp_config_dir, run_file, tmp_path, capsys):
        out = tmp_path / "scales.csv"
        code = main(_argv(temp_config_dir, "--config", str(run_file), "--out", str(out), "scales"))
        assert code == EXIT_OK
        assert "N_T =" in capsys.readouterr().out
        with open(out, newline="") as f:
            rows = list(csv.DictReader(f))
        assert tuple(rows[0].keys()) == SCALES_COLUMNS
        assert [float(r["N"]) for r in rows] == [100.0, 1000.0]
        assert float(rows[0]["aspect_ratio"]) == pytest.approx(10.0)

    def test_sweep_writes_csv(self, temp_config_dir, run_file, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(_argv(temp_config_dir, "--config", str(run_file), "--out", str(out), "sweep"))
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0].startswith(f"# schmidtbec {__version__} config_hash=")
        assert len(lines) == 2 + 2

    def test_ground_state_arguments(self, temp_config_dir, mocker):
        command = mocker.patch("schmidtbec.__main__.cmd_ground_state")
        code = main(_argv(temp_config_dir, "--mem-cap", "2.5", "ground-state", "-N", "500"))
        assert code == EXIT_OK
        run, atom_number, out, mem_cap = command.call_args.args
        assert atom_number == 500.0
        assert out == "results/ground_state.fld"
        assert mem_cap == 2.5
        assert run.trap.omega_T_hz == 350.0

    def test_verify_ok(self, mocker):
        mocker.patch("schmidtbec.__main__.cmd_verify",
                     return_value=FieldCheck(norm=1.0, max_asymmetry=0.0, min_value=0.0))
        assert main(["--log-level", "ERROR", "verify", "field.fld"]) == EXIT_OK

    def test_verify_failure(self, mocker):
        mocker.patch("schmidtbec.__main__.cmd_verify",
                     return_value=FieldCheck(norm=0.5, max_asymmetry=0.0, min_value=0.0))
        assert main(["--log-level", "ERROR", "verify", "field.fld"]) == EXIT_NUMERICAL


class TestExitCodes:

    def test_unknown_run_field(self, temp_config_dir, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"trap": {"omega_X_hz": 1.0}}))
        assert main(_argv(temp_config_dir, "--config", str(bad), "scales")) == EXIT_CONFIG
        assert "trap.omega_X_hz" in capsys.readouterr().err

    def test_mistyped_run_value(self, temp_config_dir, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"numerics": {"dt": "fast"}}))
        assert main(_argv(temp_config_dir, "--config", str(bad), "scales")) == EXIT_CONFIG
        assert "numerics.dt" in capsys.readouterr().err

    def test_mistyped_section_file(self, temp_config_dir, capsys):
        (temp_config_dir / "trap.json").write_text(json.dumps({"omega_T_hz": "350"}))
        assert main(_argv(temp_config_dir, "scales")) == EXIT_CONFIG
        assert "trap.omega_T_hz" in capsys.readouterr().err

    def test_missing_run_file(self, temp_config_dir, tmp_path):
        missing = tmp_path / "missing.json"
        assert main(_argv(temp_config_dir, "--config", str(missing), "scales")) == EXIT_CONFIG

    def test_invalid_cross_field_value(self, temp_config_dir, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"trap": {"omega_L_hz": 500.0}}))
        assert main(_argv(temp_config_dir, "--config", str(bad), "sweep")) == EXIT_CONFIG

    def test_memory_budget(self, temp_config_dir, mocker):
        mocker.patch("schmidtbec.__main__.cmd_sweep",
                     side_effect=MemoryBudgetError("too big", field_path="output.mem_cap_gib"))
        assert main(_argv(temp_config_dir, "sweep")) == EXIT_CONFIG

    def test_numerical_failure(self, temp_config_dir, mocker, capsys):
        mocker.patch("schmidtbec.__main__.cmd_sweep",
                     side_effect=ConvergenceError("did not converge", 1e-3, 10))
        assert main(_argv(temp_config_dir, "sweep")) == EXIT_NUMERICAL
        assert "Numerical failure" in capsys.readouterr().err

    def test_unexpected_failure(self, temp_config_dir, mocker):
        mocker.patch("schmidtbec.__main__.cmd_scales", side_effect=RuntimeError("boom"))
        assert main(_argv(temp_config_dir, "scales")) == EXIT_UNEXPECTED

    def test_bad_log_level(self, temp_config_dir):
        argv = ["--config-dir", str(temp_config_dir), "--log-level", "CHATTY", "scales"]
        assert main(argv) == EXIT_CONFIG


class TestLogLevel:

    def test_environment_level(self, temp_config_dir, mocker, monkeypatch):
        mocker.patch("schmidtbec.__main__.cmd_scales")
        monkeypatch.setenv("SCHMIDTBEC_LOG_LEVEL", "ERROR")
        assert main(["--config-dir", str(temp_config_dir), "scales"]) == EXIT_OK
        assert logging.getLogger().level == logging.ERROR

    def test_flag_beats_environment(self, temp_config_dir, mocker, monkeypatch):
        mocker.patch("schmidtbec.__main__.cmd_scales")
        monkeypatch.setenv("SCHMIDTBEC_LOG_LEVEL", "ERROR")
        argv = ["--config-dir", str(temp_config_dir), "--log-level", "DEBUG", "scales"]
        assert main(argv) == EXIT_OK
        assert logging.getLogger().level == logging.DEBUG


class TestDotenv:

    DOTENV_NAMES = ("SCHMIDTBEC_CONFIG_DIR", "SCHMIDTBEC_LOG_LEVEL")

    @pytest.fixture
    def dotenv_dir(self, tmp_path, monkeypatch):
        """Working directory whose .env points at its own config directory."""
        config_dir = tmp_path / "from_dotenv"
        config_dir.mkdir()
        (config_dir / "trap.json").write_text(json.dumps({"omega_T_hz": 175.0}))
        (tmp_path / ".env").write_text(
            f'SCHMIDTBEC_CONFIG_DIR="{config_dir}"\nSCHMIDTBEC_LOG_LEVEL=ERROR\n')
        for name in self.DOTENV_NAMES:
            # registered so that undo also drops the values read from .env
            monkeypatch.setenv(name, "")
            monkeypatch.delenv(name)
        monkeypatch.chdir(tmp_path)
        return config_dir

    def test_dotenv_selects_config_dir(self, dotenv_dir, mocker):
        command = mocker.patch("schmidtbec.__main__.cmd_scales")
        assert main(["scales"]) == EXIT_OK
        run, _ = command.call_args.args
        assert run.trap.omega_T_hz == 175.0
        assert logging.getLogger().level == logging.ERROR

    def test_environment_beats_dotenv(self, dotenv_dir, temp_config_dir, mocker, monkeypatch):
        command = mocker.patch("schmidtbec.__main__.cmd_scales")
        monkeypatch.setenv("SCHMIDTBEC_CONFIG_DIR", str(temp_config_dir))
        assert main(["scales"]) == EXIT_OK
        run, _ = command.call_args.args
        assert run.trap.omega_T_hz == 350.0
