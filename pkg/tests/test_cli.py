"""Tests for the qsl command line: output and exit codes."""

import json

import pytest

from app.cli import build_parser, main, to_request
from app.models.enums import ExitCode, OutputFormat
from app.models.schemas import CommandRequest, DomainOverrides
from app.services.commands import execute_command

SMALL = ["--vmin", "0", "--vmax", "2", "--addrs", "2"]
GEOMETRIC = "while (x = 0) { { x := 1 } [1/2] { skip } }"


def run(capsys, *argv: str) -> tuple[int, str]:
    code = main(list(argv))
    return code, capsys.readouterr().out


class TestParsing:
    """Test flag parsing into command requests."""

    def test_domain_flags_become_overrides(self):
        args = build_parser().parse_args(["wp", "--prog-text", "skip", "--post", "1", "--addrs", "2", "--loop-tol", "1/10"])
        req = to_request(args)
        assert req.command == "wp"
        assert req.domain.addrs == 2
        assert req.domain.loop_tol == "1/10"
        assert req.output is OutputFormat.TEXT

    def test_repeatable_states(self):
        args = build_parser().parse_args(["eval", "--expr", "1", "--state", "x=1", "--state", "x=2"])
        assert to_request(args).states == ["x=1", "x=2"]

    def test_bad_flag_is_input_error(self, capsys):
        assert main(["wp", "--bogus"]) == ExitCode.INPUT_ERROR


class TestCommands:
    """Test each command end to end on small models."""

    def test_eval_single_state(self, capsys):
        code, out = run(capsys, "eval", "--expr", "size", "--state", "x=0; heap=1:2,2:0", *SMALL)
        assert code == ExitCode.OK
        assert out.strip() == "2"

    def test_eval_from_config_file(self, capsys, tmp_path):
        config = tmp_path / "small.cfg"
        config.write_text("vars=x\nvmin=0 vmax=2 addrs=2\n", encoding="utf-8")
        code, out = run(capsys, "eval", "--expr", "x |-> -", "--state", "x=1; heap=1:0", "--config", str(config))
        assert code == ExitCode.OK
        assert out.strip() == "1"

    def test_wp(self, capsys):
        code, out = run(capsys, "wp", "--prog-text", "free(x)", "--post", "[emp]", "--state", "x=1; heap=1:0", *SMALL)
        assert code == ExitCode.OK
        assert out.strip() == "1"

    def test_wp_enumerates_states_as_json(self, capsys):
        code, out = run(
            capsys, "wp", "--prog-text", "skip", "--post", "size", "--vars", "x", "--max-cells", "1",
            "--output", "json", *SMALL,
        )
        report = json.loads(out)
        assert code == ExitCode.OK
        assert report["command"] == "wp"
        assert report["config"]["addr_count"] == 2
        # 3 stacks, 1 + 2·3 heaps
        assert len(report["results"]) == 21

    def test_oracle(self, capsys):
        code, out = run(
            capsys, "oracle", "--prog-text", "x := new(0)", "--post", "[x = 1]", "--state", "x=0",
            "--direction", "max", *SMALL,
        )
        assert code == ExitCode.OK
        assert "->  1" in out
        assert "status=exact" in out

    def test_oracle_export(self, capsys, tmp_path):
        target = tmp_path / "fragment.json"
        code, out = run(
            capsys, "oracle", "--prog-text", "x := new(0)", "--post", "[x = 1]", "--state", "x=0",
            "--direction", "max", "--export", str(target), *SMALL,
        )
        assert code == ExitCode.OK
        assert f"export={target}" in out
        dump = json.loads(target.read_text())
        assert set(dump) == {"inits", "configurations"}
        (init,) = dump["inits"].values()
        root = dump["configurations"][init]
        assert root["value"] == "1"
        assert {t["action"] for t in root["transitions"]} == {1, 2}
        assert len(dump["configurations"]) == 3

    def test_oracle_export_unwritable(self, capsys, tmp_path):
        code, out = run(
            capsys, "oracle", "--prog-text", "skip", "--post", "1", "--state", "x=0",
            "--export", str(tmp_path / "missing" / "fragment.json"), *SMALL,
        )
        assert code == ExitCode.INPUT_ERROR
        assert "cannot write fragment export" in out

    def test_check_soundness(self, capsys):
        code, out = run(
            capsys, "check-soundness", "--prog-text", "y := <x>", "--post", "y", "--max-cells", "1",
            "--output", "json", *SMALL,
        )
        (row,) = json.loads(out)["results"]
        assert code == ExitCode.OK
        assert row["verdict"] == "holds"
        assert row["exact"] is True

    def test_frame_converse_is_a_violation(self, capsys):
        code, out = run(
            capsys, "check-frame", "--prog-text", "<x> := 0", "--post", "[emp]", "--frame", "x ~> 0",
            "--direction", "super", "--vars", "x", *SMALL,
        )
        assert code == ExitCode.VIOLATION
        assert "witness: verdict=counterexample" in out

    def test_frame_side_condition_is_input_error(self, capsys):
        code, out = run(
            capsys, "check-frame", "--prog-text", "x := 1", "--post", "1", "--frame", "[x = 0]", *SMALL,
        )
        assert code == ExitCode.INPUT_ERROR
        assert out.startswith("error (input-error)")

    def test_conservativity(self, capsys):
        code, out = run(
            capsys, "check-conservativity", "--prog-text", "free(x)", "--pre", "x |-> 0", "--post", "emp", *SMALL,
        )
        assert code == ExitCode.OK
        assert "verdict=agree" in out

    def test_invariant_counterexample(self, capsys):
        code, out = run(
            capsys, "check-invariant", "--prog-text", GEOMETRIC, "--post", "1", "--inv", "[x = 1]",
            "--vars", "x", "--max-cells", "0", *SMALL,
        )
        assert code == ExitCode.VIOLATION
        assert "lhs=1/2" in out

    def test_laws(self, capsys):
        code, out = run(
            capsys, "laws", "--laws", "sepcon.comm", "--trials", "2", "--vars", "x", "--max-cells", "2", *SMALL,
        )
        assert code == ExitCode.OK
        assert "law_id=sepcon.comm" in out
        assert "violations=0" in out

    def test_casestudy(self, capsys):
        code, out = run(capsys, "casestudy", "continuity", "--size", "2", "--output", "json")
        assert code == ExitCode.OK
        assert json.loads(out)["results"][0]["holds"] is True


class TestExecuteCommand:
    """Test the command service without the argument parser."""

    def test_report_fields(self):
        req = CommandRequest(
            command="eval", expr="size", states=["x=0; heap=1:2"],
            domain=DomainOverrides(vars="x,y", vmin=0, vmax=2, addrs=2),
        )
        report = execute_command(req)
        assert report.exit_code == ExitCode.OK
        assert report.results == [{"state": "x=0,y=0; heap=1:2", "value": "1"}]
        assert report.error is None

    def test_unknown_command(self):
        report = execute_command(CommandRequest(command="prove-everything"))
        assert report.exit_code == ExitCode.INPUT_ERROR
        assert report.error["kind"] == "input-error"


class TestExitCodes:
    """Test the mapping of errors onto exit codes."""

    def test_parse_error(self, capsys):
        code, out = run(capsys, "eval", "--expr", "size **", "--state", "x=0", *SMALL)
        assert code == ExitCode.INPUT_ERROR
        assert out.startswith("error (parse-error)")

    def test_missing_program(self, capsys):
        code, _ = run(capsys, "wp", "--post", "1", *SMALL)
        assert code == ExitCode.INPUT_ERROR

    def test_value_domain_exceeded(self, capsys):
        code, out = run(capsys, "wp", "--prog-text", "x := x + 1", "--post", "1", "--state", "x=2", *SMALL)
        assert code == ExitCode.MODEL_ADEQUACY
        assert "value-domain-exceeded" in out

    def test_loop_budget(self, capsys):
        code, _ = run(
            capsys, "wp", "--prog-text", GEOMETRIC, "--post", "1", "--state", "x=0", "--loop-max-iters", "2", *SMALL,
        )
        assert code == ExitCode.BUDGET_EXHAUSTED

    def test_json_error_report(self, capsys):
        code, out = run(capsys, "eval", "--expr", "[z = 0", "--state", "x=0", "--output", "json", *SMALL)
        report = json.loads(out)
        assert code == ExitCode.INPUT_ERROR
        assert report["exit_code"] == 2
        assert report["error"]["kind"] == "parse-error"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
