"""Command-line entry point wiring ingestion, engine, and analysis together.

Precedence: command-line flags override config-file values. Giving any input
flag (--signals/--antigen/--scenario) replaces the config file's input
selection entirely, so a shared engine config can be pointed at new data
without editing it. All randomness flows from the configured seeds; --seed
overrides both the engine seed and the scenario seed in one stroke.
"""

from __future__ import annotations

import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from .analysis import (
    CSV_HEADER,
    MCAVReport,
    TypeStats,
    classify,
    report_from_json,
    report_to_csv,
    report_to_json,
)
from .config import FORMATS, RunConfig, load_run_config, load_scenario
from .engine import EngineConfig
from .errors import DendricellError
from .ingestion import parse_antigen_stream, parse_signal_stream
from .oracle import oracle_run
from .runner import diagnostics_to_csv, run_replay
from .scenarios import generate

INPUT_FLAGS = ("--signals", "--antigen", "--scenario")


@click.group()
@click.version_option(package_name="dendricell")
def main():
    """Population-based anomaly scoring over signal and antigen streams."""


def _merged_config(config, signals, antigen, scenario, seed, out, fmt, threshold, live):
    cfg = load_run_config(config) if config else RunConfig(engine=EngineConfig())
    if signals or antigen or scenario:
        cfg.signals_path = None
        cfg.antigen_path = None
        cfg.scenario = None
    if signals:
        cfg.signals_path = signals
    if antigen:
        cfg.antigen_path = antigen
    if scenario:
        cfg.scenario = load_scenario(scenario)
    if seed is not None:
        cfg.engine = replace(cfg.engine, rng_seed=seed)
        if cfg.scenario is not None:
            cfg.scenario = replace(cfg.scenario, seed=seed)
    if out:
        cfg.out_path = out
    if fmt:
        cfg.out_format = fmt
    if threshold is not None:
        cfg.anomaly_threshold = threshold
    if live:
        cfg.live = True
    cfg.validate()
    return cfg


def _read_stream(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot read stream {path}: {exc}") from exc


def _load_inputs(cfg: RunConfig):
    """Resolve the selected input source into records, events, and a mapping."""
    if cfg.scenario is not None:
        generated = generate(cfg.scenario, maxima=cfg.engine.signal_maxima)
        return generated.signal_records, generated.antigen_events, None
    records = parse_signal_stream(_read_stream(cfg.signals_path))
    events = parse_antigen_stream(_read_stream(cfg.antigen_path))
    return records, events, cfg.signal_mapping()


def _render_report(report: MCAVReport, labels: dict[str, str], fmt: str) -> str:
    if fmt == "csv":
        return report_to_csv(report, labels)
    return report_to_json(report, labels)


def _echo_summary(report: MCAVReport, labels: dict[str, str]) -> None:
    if not report.entries:
        click.echo("no antigen presented; empty report")
        return
    width = max(len("antigen_type"), *(len(e.antigen_type) for e in report.entries))
    click.echo(
        f"{'antigen_type':<{width}}  {'antigen_count':>13}  {'mature_count':>12}"
        f"  {'mcav':>8}  label"
    )
    for entry in report.entries:
        click.echo(
            f"{entry.antigen_type:<{width}}  {entry.antigen_count:>13}"
            f"  {entry.mature_count:>12}  {entry.mcav:>8.4f}  {labels[entry.antigen_type]}"
        )
    if report.meta is not None:
        meta = report.meta
        click.echo(
            f"ticks={meta.ticks} seed={meta.seed} config={meta.config_digest}"
            f" empty_migrations={meta.empty_migrations} overflow={meta.overflow_count}"
        )


_common_run_options = [
    click.option("--config", type=str, default=None, help="TOML run config file."),
    click.option("--signals", type=str, default=None, help="Signal stream path ('-' for stdin)."),
    click.option("--antigen", type=str, default=None, help="Antigen stream path ('-' for stdin)."),
    click.option("--scenario", type=str, default=None, help="Scenario TOML to generate and run."),
    click.option("--seed", type=int, default=None, help="Override engine and scenario seeds."),
    click.option("--out", type=str, default=None, help="Report path (default report.<format>)."),
    click.option("--format", "fmt", type=click.Choice(FORMATS), default=None, help="Report format."),
    click.option("--threshold", type=float, default=None, help="Anomaly threshold on mcav."),
]


def _with_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


@main.command()
@_with_options(_common_run_options)
@click.option("--live", is_flag=True, help="Pace the replay at tick_interval seconds per tick.")
def run(config, signals, antigen, scenario, seed, out, fmt, threshold, live):
    """Replay streams through the engine and write an MCAV report."""
    try:
        cfg = _merged_config(config, signals, antigen, scenario, seed, out, fmt, threshold, live)
        records, events, mapping = _load_inputs(cfg)
        result = run_replay(
            cfg.engine,
            records,
            events,
            mapping,
            tick_interval=cfg.tick_interval if cfg.live else None,
        )
        labels = classify(result.report, cfg.anomaly_threshold)
        out_path = Path(cfg.resolved_out())
        out_path.write_text(_render_report(result.report, labels, cfg.out_format), encoding="utf-8")
        diag_path = out_path.parent / (out_path.stem + ".diag.csv")
        diag_path.write_text(diagnostics_to_csv(result.history), encoding="utf-8")
        _echo_summary(result.report, labels)
        click.echo(f"report written to {out_path}, diagnostics to {diag_path}")
    except DendricellError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@_with_options(_common_run_options)
def oracle(config, signals, antigen, scenario, seed, out, fmt, threshold):
    """Run the reference oracle on the same inputs run accepts."""
    try:
        cfg = _merged_config(config, signals, antigen, scenario, seed, out, fmt, threshold, False)
        records, events, mapping = _load_inputs(cfg)
        report = oracle_run(cfg.engine, records, events, mapping)
        labels = classify(report, cfg.anomaly_threshold)
        out_path = Path(cfg.resolved_out())
        out_path.write_text(_render_report(report, labels, cfg.out_format), encoding="utf-8")
        _echo_summary(report, labels)
        click.echo(f"report written to {out_path}")
    except DendricellError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command(name="generate")
@click.option("--scenario", type=str, required=True, help="Scenario TOML file.")
@click.option("--config", type=str, default=None, help="Run config supplying signal maxima.")
@click.option("--seed", type=int, default=None, help="Override the scenario seed.")
@click.option("--out-signals", type=str, default="signals.csv", show_default=True)
@click.option("--out-antigen", type=str, default="antigen.csv", show_default=True)
@click.option("--truth", type=str, default=None, help="Also write ground-truth labels (JSON).")
def generate_cmd(scenario, config, seed, out_signals, out_antigen, truth):
    """Emit a scenario's signal and antigen streams to files."""
    try:
        spec = load_scenario(scenario)
        if seed is not None:
            spec = replace(spec, seed=seed)
        maxima = (100.0, 100.0, 100.0)
        if config:
            maxima = load_run_config(config).engine.signal_maxima
        generated = generate(spec, maxima=maxima)
        Path(out_signals).write_text(generated.signal_text(), encoding="utf-8")
        Path(out_antigen).write_text(generated.antigen_text(), encoding="utf-8")
        if truth:
            Path(truth).write_text(
                json.dumps(generated.truth, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        click.echo(
            f"wrote {len(generated.signal_records)} signal records to {out_signals}, "
            f"{len(generated.antigen_events)} antigen events to {out_antigen}"
        )
    except DendricellError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.argument("report_path", type=str)
def inspect(report_path):
    """Pretty-print a report file, sorted by descending mcav."""
    try:
        text = _read_stream(report_path)
        if report_path.endswith(".json"):
            report, labels = report_from_json(text)
        else:
            report, labels = _report_from_csv(text)
    except DendricellError as exc:
        raise click.ClickException(str(exc)) from exc
    except (KeyError, ValueError) as exc:
        raise click.ClickException(f"{report_path} is not a readable report: {exc}") from exc
    ordered = sorted(report.entries, key=lambda e: (-e.mcav, e.antigen_type))
    _echo_summary(MCAVReport(entries=tuple(ordered), meta=report.meta), labels)


def _report_from_csv(text: str) -> tuple[MCAVReport, dict[str, str]]:
    lines = [line for line in text.splitlines() if line.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise DendricellError(f"expected header {CSV_HEADER!r}")
    entries = []
    labels = {}
    for line in lines[1:]:
        antigen_type, antigen_count, mature_count, mcav, label = line.split(",")
        entries.append(
            TypeStats(
                antigen_type=antigen_type,
                antigen_count=int(antigen_count),
                mature_count=int(mature_count),
                mcav=float(mcav),
            )
        )
        labels[antigen_type] = label
    return MCAVReport(entries=tuple(entries)), labels
