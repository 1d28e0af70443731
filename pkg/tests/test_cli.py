"""End-to-end CLI behavior through click's test runner."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from dendricell.cli import main

SPLIT_TOML = """
duration_ticks = 60
noise_amplitude = 0.0
seed = 7

[[phases]]
start = 0
end = 30
profile = "attack"

[[phases]]
start = 30
end = 60
profile = "normal"

[[antigen]]
type = "scanner"
phases = [0]
rate = 1.0

[[antigen]]
type = "browser"
phases = [1]
rate = 1.0
"""

RUN_TOML = """
[engine]
rng_seed = 7
threshold_scale = 0.1
"""


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def workspace(runner):
    with runner.isolated_filesystem():
        Path("split.toml").write_text(SPLIT_TOML)
        Path("run.toml").write_text(RUN_TOML)
        yield Path(".")


def invoke(runner, *args):
    result = runner.invoke(main, list(args))
    return result


def test_run_scenario_writes_report_and_diagnostics(runner, workspace):
    result = invoke(
        runner, "run", "--config", "run.toml", "--scenario", "split.toml",
        "--out", "report.json", "--format", "json",
    )
    assert result.exit_code == 0, result.output
    assert "scanner" in result.output and "anomalous" in result.output
    payload = json.loads(Path("report.json").read_text())
    by_type = {e["antigen_type"]: e for e in payload["entries"]}
    assert by_type["scanner"]["mcav"] == 1.0
    assert by_type["browser"]["mcav"] == 0.0
    assert payload["meta"]["ticks"] == 60
    diag = Path("report.diag.csv").read_text().splitlines()
    assert diag[0] == "tick,mean_csm,mean_semi,mean_mature,migrations"
    assert len(diag) == 61


def test_repeat_runs_are_byte_identical(runner, workspace):
    for out in ("one.csv", "two.csv"):
        result = invoke(
            runner, "run", "--config", "run.toml", "--scenario", "split.toml", "--out", out,
        )
        assert result.exit_code == 0, result.output
    assert Path("one.csv").read_bytes() == Path("two.csv").read_bytes()


def test_generate_then_run_matches_direct_scenario_run(runner, workspace):
    result = invoke(
        runner, "generate", "--scenario", "split.toml",
        "--out-signals", "s.csv", "--out-antigen", "g.csv", "--truth", "truth.json",
    )
    assert result.exit_code == 0, result.output
    assert json.loads(Path("truth.json").read_text()) == {
        "scanner": "anomalous",
        "browser": "normal",
    }
    direct = invoke(
        runner, "run", "--config", "run.toml", "--scenario", "split.toml",
        "--out", "direct.json", "--format", "json",
    )
    replayed = invoke(
        runner, "run", "--config", "run.toml", "--signals", "s.csv", "--antigen", "g.csv",
        "--out", "replayed.json", "--format", "json",
    )
    assert direct.exit_code == 0 and replayed.exit_code == 0
    assert Path("direct.json").read_bytes() == Path("replayed.json").read_bytes()


def test_oracle_report_matches_run_report(runner, workspace):
    invoke(
        runner, "run", "--config", "run.toml", "--scenario", "split.toml",
        "--out", "engine.json", "--format", "json",
    )
    result = invoke(
        runner, "oracle", "--config", "run.toml", "--scenario", "split.toml",
        "--out", "oracle.json", "--format", "json",
    )
    assert result.exit_code == 0, result.output
    assert Path("engine.json").read_bytes() == Path("oracle.json").read_bytes()


def test_seed_flag_overrides_engine_and_scenario(runner, workspace):
    for seed, out in ((1, "a.json"), (2, "b.json")):
        result = invoke(
            runner, "run", "--scenario", "split.toml", "--seed", str(seed),
            "--out", out, "--format", "json",
        )
        assert result.exit_code == 0, result.output
    a = json.loads(Path("a.json").read_text())
    b = json.loads(Path("b.json").read_text())
    assert a["meta"]["seed"] == 1
    assert b["meta"]["seed"] == 2
    assert a["meta"]["config_digest"] != b["meta"]["config_digest"]


def test_threshold_flag_changes_labels(runner, workspace):
    # with threshold 0 every presented type is anomalous
    result = invoke(
        runner, "run", "--config", "run.toml", "--scenario", "split.toml",
        "--threshold", "0.0", "--out", "r.csv",
    )
    assert result.exit_code == 0, result.output
    rows = Path("r.csv").read_text().splitlines()[1:]
    assert all(row.endswith(",anomalous") for row in rows)


def test_stdin_stream_input(runner, workspace):
    invoke(runner, "generate", "--scenario", "split.toml",
           "--out-signals", "s.csv", "--out-antigen", "g.csv")
    signal_text = Path("s.csv").read_text()
    result = runner.invoke(
        main,
        ["run", "--config", "run.toml", "--signals", "-", "--antigen", "g.csv",
         "--out", "piped.json", "--format", "json"],
        input=signal_text,
    )
    assert result.exit_code == 0, result.output
    assert json.loads(Path("piped.json").read_text())["meta"]["ticks"] == 60


def test_inspect_sorts_by_descending_mcav(runner, workspace):
    invoke(
        runner, "run", "--config", "run.toml", "--scenario", "split.toml",
        "--out", "report.json", "--format", "json",
    )
    result = invoke(runner, "inspect", "report.json")
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[1].startswith("scanner")
    assert lines[2].startswith("browser")

    invoke(
        runner, "run", "--config", "run.toml", "--scenario", "split.toml", "--out", "report.csv",
    )
    result = invoke(runner, "inspect", "report.csv")
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[1].startswith("scanner")


def test_error_exits_are_nonzero_and_distinct(runner, workspace):
    two_sources = invoke(
        runner, "run", "--scenario", "split.toml", "--signals", "s.csv", "--antigen", "g.csv",
    )
    assert two_sources.exit_code != 0
    assert "two input sources" in two_sources.output

    missing = invoke(runner, "run", "--signals", "absent.csv", "--antigen", "also.csv")
    assert missing.exit_code != 0
    assert "cannot read stream" in missing.output

    Path("bad.csv").write_text("0,pamp,fine\n")
    Path("g.csv").write_text("0,a\n")
    malformed = invoke(runner, "run", "--signals", "bad.csv", "--antigen", "g.csv")
    assert malformed.exit_code != 0
    assert "line 1" in malformed.output

    no_source = invoke(runner, "run")
    assert no_source.exit_code != 0
    assert "no input source" in no_source.output

    bad_format = invoke(runner, "run", "--scenario", "split.toml", "--format", "xml")
    assert bad_format.exit_code != 0


def test_empty_report_path(runner, workspace):
    # thresholds so high nothing migrates within the scenario
    Path("slow.toml").write_text("[engine]\nthreshold_scale = 1e6\n")
    result = invoke(
        runner, "run", "--config", "slow.toml", "--scenario", "split.toml", "--out", "e.csv",
    )
    assert result.exit_code == 0, result.output
    assert "no antigen presented" in result.output
    assert Path("e.csv").read_text() == "antigen_type,antigen_count,mature_count,mcav,label\n"
