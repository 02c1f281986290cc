"""Command-line interface: verbs, exit codes, formats, and config handling."""

import json

import pytest

from toda_whittaker import cli
from toda_whittaker.errors import BudgetExceeded


def run(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_gl2_closed_json(self, capsys):
        code, out, err = run(
            ["eval", "--algebra", "gl2", "--lambda", "1,-1", "--x", "0,0",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"]["re"] == pytest.approx(0.09599598171294128, rel=1e-12)
        assert payload["value"]["im"] == pytest.approx(0.0, abs=1e-15)
        assert payload["converged"] is True

    def test_unknown_rank_fails(self, capsys):
        code, out, err = run(
            ["eval", "--algebra", "gl9", "--lambda", "1", "--x", "0"],
            capsys,
        )
        assert code == 1
        assert "RankError" in err

    def test_missing_flags_fail(self, capsys):
        code, out, err = run(["eval", "--algebra", "gl2"], capsys)
        assert code == 1
        assert out == ""

    def test_text_format_has_sign(self, capsys):
        code, out, err = run(
            ["eval", "--algebra", "gl1", "--lambda", "0.7", "--x", "0.3",
             "--format", "text"],
            capsys,
        )
        assert code == 0
        assert "j" in out and ("+" in out or "-" in out)


class TestVerify:
    def test_stade_suite_json(self, capsys):
        code, out, err = run(
            ["verify", "--suite", "stade", "--format", "json"], capsys
        )
        assert code == 0
        lines = [json.loads(line) for line in out.strip().splitlines()]
        assert lines and all(rec["pass"] for rec in lines)
        assert "passed" in err

    def test_unknown_suite_fails(self, capsys):
        code, out, err = run(["verify", "--suite", "no-such-suite"], capsys)
        assert code == 1

    def test_failing_case_exits_3(self, capsys, monkeypatch):
        monkeypatch.setitem(
            cli._SUITES,
            "always-fail",
            lambda o: [
                ("boom", lambda: cli.CaseResult("boom", 0.0, 1.0, 1.0, 1e-8, False))
            ],
        )
        code, out, err = run(["verify", "--suite", "always-fail"], capsys)
        assert code == 3
        assert "FAIL" in out

    def test_budget_hit_exits_2(self, capsys, monkeypatch):
        def _raise():
            raise BudgetExceeded("out of evaluations", result=0.0,
                                 max_evaluations=10)

        monkeypatch.setitem(
            cli._SUITES, "always-budget", lambda o: [("slow", _raise)]
        )
        code, out, err = run(["verify", "--suite", "always-budget"], capsys)
        assert code == 2

    def test_deterministic_output(self, capsys):
        _, out_a, _ = run(["verify", "--suite", "barnes", "--format", "csv"], capsys)
        _, out_b, _ = run(["verify", "--suite", "barnes", "--format", "csv"], capsys)
        assert out_a == out_b

    def test_workers_flag(self, capsys):
        code, out, err = run(
            ["verify", "--suite", "barnes", "--workers", "2"], capsys
        )
        assert code == 0


class TestLFactor:
    def test_exact_rational_text(self, capsys):
        code, out, err = run(
            ["lfactor", "--place", "5", "--satake", "2,3", "--s", "2"],
            capsys,
        )
        assert code == 0
        assert "625/506" in out

    def test_exact_rational_json(self, capsys):
        code, out, err = run(
            ["lfactor", "--place", "5", "--satake", "2,3", "--s", "2",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == {"num": "625", "den": "506"}

    def test_pole_fails(self, capsys):
        code, out, err = run(
            ["lfactor", "--place", "5", "--satake", "5,1/2", "--s", "1"],
            capsys,
        )
        assert code == 1
        assert "PoleError" in err

    def test_archimedean(self, capsys):
        code, out, err = run(
            ["lfactor", "--place", "inf", "--alpha", "0", "--s", "1",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["value"]["re"] == pytest.approx(1.0, rel=1e-12)


class TestKernel:
    def test_sweep_csv(self, capsys):
        code, out, err = run(
            ["kernel", "--kind", "baxter", "--gamma=-1.2j", "--x", "0.0",
             "--y", "0.1", "--sweep", "0:-1:1:11", "--format", "csv"],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "t,re,im"
        assert len(lines) == 12

    def test_sweep_needs_two_points(self, capsys):
        code, out, err = run(
            ["kernel", "--kind", "baxter", "--gamma=-1.2j", "--x", "0.0",
             "--y", "0.1", "--sweep", "0:-1:1:1"],
            capsys,
        )
        assert code == 1


class TestConfigAndDispatch:
    def test_config_file_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("algebra = gl1\nlambda = 0.7\nx = 0.3\nformat = json\n")
        code, out, err = run(["eval", "--config", str(cfg)], capsys)
        assert code == 0
        assert json.loads(out)["converged"] is True

    def test_flag_overrides_config(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("algebra = gl9\nlambda = 0.7\nx = 0.3\n")
        code, out, err = run(
            ["eval", "--config", str(cfg), "--algebra", "gl1"], capsys
        )
        assert code == 0

    def test_bad_config_fails(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("this line has no equals sign\n")
        code, out, err = run(
            ["eval", "--config", str(cfg), "--algebra", "gl1",
             "--lambda", "0.7", "--x", "0.3"],
            capsys,
        )
        assert code == 1

    def test_missing_config_fails(self, capsys):
        code, out, err = run(
            ["eval", "--config", "/no/such/file.cfg", "--algebra", "gl1",
             "--lambda", "0.7", "--x", "0.3"],
            capsys,
        )
        assert code == 1

    def test_no_command_fails(self, capsys):
        code, out, err = run([], capsys)
        assert code == 1

    def test_baxter_apply_verb(self, capsys):
        code, out, err = run(
            ["baxter-apply", "--algebra", "gl", "--lambda", "0.4",
             "--gamma=-1.2j", "--y", "0.2", "--tol", "1e-6",
             "--format", "json"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["residual"] < 1e-5
