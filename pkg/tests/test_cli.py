"""Tests for the command-line front end: exit codes, CSV output, configs."""

import sys
from pathlib import Path

import pytest

from multirate.cli import main

ROOT = Path(__file__).resolve().parent.parent
REVERSAL = str(ROOT / "scenarios" / "turn-reversal.txt")
HOLD = str(ROOT / "scenarios" / "hold-course.txt")
RULES = str(ROOT / "configs" / "pilot-rules.txt")
DEFAULT_CFG = str(ROOT / "configs" / "airplane-default.cfg")

FORMULA = "[] (~ stable -> (safeYaw U (reach /\\ stable)))"


def run(*argv):
    return main(list(argv))


class TestSimulate:
    def test_writes_csv_with_one_row_per_record(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        code = run("simulate", "--scenario", REVERSAL, "--laws", "v2",
                   "--bound", "6000", "--out", str(out))
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "step,time_ms,dir,roll,yaw,goal"
        assert len(lines) == 1 + 100  # 10 steps x 10 records
        first = lines[1].split(",")
        assert first[0] == "1" and first[1] == "60"
        last = lines[-1].split(",")
        assert last[0] == "10" and last[1] == "6000"

    def test_time_column_increases_by_sixty(self, tmp_path):
        out = tmp_path / "trace.csv"
        run("simulate", "--scenario", REVERSAL, "--bound", "1800", "--out", str(out))
        times = [int(l.split(",")[1]) for l in out.read_text().splitlines()[1:]]
        assert times == list(range(60, 1860, 60))

    def test_bound_zero_header_only(self, tmp_path, capsys):
        out = tmp_path / "trace.csv"
        code = run("simulate", "--scenario", REVERSAL, "--bound", "0", "--out", str(out))
        assert code == 0
        assert out.read_text().splitlines() == ["step,time_ms,dir,roll,yaw,goal"]

    def test_missing_scenario_file_is_usage_error(self, capsys):
        assert run("simulate", "--scenario", "nope.txt", "--bound", "600") == 2

    def test_stdout_when_no_out_path(self, capsys):
        code = run("simulate", "--scenario", REVERSAL, "--bound", "600")
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "step,time_ms,dir,roll,yaw,goal"
        assert len(lines) == 11

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            run("simulate", "--scenario", REVERSAL, "--laws", "v2",
                "--bound", "6000", "--out", str(out), "--config", DEFAULT_CFG)
        assert a.read_bytes() == b.read_bytes()

    def test_csv_roundtrip_via_replay(self, tmp_path):
        out1, out2 = tmp_path / "1.csv", tmp_path / "2.csv"
        run("simulate", "--scenario", REVERSAL, "--bound", "3000", "--out", str(out1))
        run("simulate", "--scenario", REVERSAL, "--bound", "3000", "--out", str(out2))
        assert out1.read_text() == out2.read_text()


class TestSearch:
    def test_no_solution_exits_zero(self, capsys):
        code = run("search", "--scenario", REVERSAL, "--laws", "v2",
                   "--pred", "unsafe-yaw", "--bound", "6000")
        assert code == 0
        assert "No solution" in capsys.readouterr().out

    def test_solution_found_exits_one(self, capsys):
        code = run("search", "--scenario", REVERSAL, "--laws", "v1",
                   "--pred", "unsafe-yaw", "--bound", "6000")
        assert code == 1
        assert "solution 1" in capsys.readouterr().out

    def test_max_zero_is_usage_error(self, capsys):
        code = run("search", "--scenario", REVERSAL, "--pred", "unsafe-yaw",
                   "--bound", "600", "--max", "0")
        assert code == 2

    def test_unknown_pred_is_usage_error(self, capsys):
        code = run("search", "--scenario", REVERSAL, "--pred", "wat", "--bound", "600")
        assert code == 2


class TestCheck:
    def test_flagship_formula_holds(self, capsys):
        code = run("check", "--scenario", REVERSAL, "--laws", "v2",
                   "--formula", FORMULA, "--bound", "7200")
        assert code == 0
        out = capsys.readouterr().out
        assert "holds" in out and "explored states:" in out

    def test_not_true_violated_with_counterexample(self, tmp_path, capsys):
        out = tmp_path / "cex.csv"
        code = run("check", "--scenario", REVERSAL, "--formula", "~ True",
                   "--bound", "1200", "--out", str(out))
        assert code == 1
        assert "violated" in capsys.readouterr().out
        assert out.read_text().startswith("step,time_ms")

    def test_bad_formula_is_usage_error(self, capsys):
        code = run("check", "--scenario", REVERSAL, "--formula", "p /\\", "--bound", "600")
        assert code == 2

    def test_warns_on_ragged_bound(self, capsys):
        code = run("check", "--scenario", REVERSAL, "--formula", "True", "--bound", "700")
        assert code == 0
        assert "warning" in capsys.readouterr().err


class TestValidate:
    def test_default_model_is_valid(self, capsys):
        assert run("validate") == 0
        assert "model valid" in capsys.readouterr().out

    def test_period_override_reports_rate_period(self, tmp_path, capsys):
        cfg = tmp_path / "broken.cfg"
        cfg.write_text("period.rudder = 21\n")
        code = run("validate", "--config", str(cfg))
        assert code == 3
        assert "rate-period" in capsys.readouterr().out

    def test_fast_fast_connection_reported(self, tmp_path, capsys):
        cfg = tmp_path / "broken.cfg"
        cfg.write_text("extra_connection = left.output->right.input\n")
        code = run("validate", "--config", str(cfg))
        assert code == 3
        assert "fast-fast" in capsys.readouterr().out

    def test_unknown_config_key_is_usage_error(self, tmp_path):
        cfg = tmp_path / "broken.cfg"
        cfg.write_text("warp_drive = on\n")
        assert run("validate", "--config", str(cfg)) == 2

    def test_default_config_parses(self):
        assert run("validate", "--config", DEFAULT_CFG) == 0


class TestNondeterministic:
    def test_check_with_env_rules(self, capsys):
        code = run("check", "--scenario", HOLD, "--env-rules", RULES,
                   "--formula", "True", "--bound", "1200")
        assert code == 0

    def test_budget_flag_limits_exploration(self, capsys):
        code = run("check", "--scenario", HOLD, "--env-rules", RULES,
                   "--formula", "True", "--bound", "3000", "--budget", "10")
        assert code == 2
        assert "budget" in capsys.readouterr().err


class TestUsage:
    def test_missing_required_flag(self):
        assert run("search", "--bound", "600") == 2

    def test_unknown_command(self):
        assert run("transmogrify") == 2
