"""Replay driver: feeds parsed streams through an engine, tick by tick.

Replay advances one engine tick per distinct input tick across the two
streams, renumbering sparse or offset input ticks onto the dense engine
clock 0..n-1. Signal snapshots persist between deposits, so a tick that only
carries antigen is processed under the most recent signals.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .analysis import MCAVReport, RunMetadata, compute_mcav
from .engine import Engine, EngineConfig, TickStats
from .errors import DendricellError
from .ingestion import RawMetricRecord, SignalMapping, identity_mapping, map_to_snapshot
from .model import AntigenEvent

__all__ = ["RunResult", "run_replay", "diagnostics_to_csv"]

DIAG_HEADER = "tick,mean_csm,mean_semi,mean_mature,migrations"


@dataclass
class RunResult:
    report: MCAVReport
    history: list[TickStats]
    accounting: dict[str, int]
    engine: Engine


def run_replay(
    cfg: EngineConfig,
    signal_records: list[RawMetricRecord],
    antigen_events: list[AntigenEvent],
    mapping: SignalMapping | None = None,
    *,
    check_conservation: bool = True,
    tick_interval: float | None = None,
) -> RunResult:
    """Run the full pipeline over both streams and aggregate the lymph log.

    check_conservation audits the antigen ledger after every tick: deposited
    events must all be in the pool, in a cell store, presented, or evicted.
    tick_interval, when set, sleeps that many seconds after each tick to pace
    the replay against wall-clock time.
    """
    cfg.validate()
    if mapping is None:
        mapping = identity_mapping(cfg.signal_maxima)

    signals_by_tick: dict[int, list[RawMetricRecord]] = {}
    for record in signal_records:
        signals_by_tick.setdefault(record.tick, []).append(record)
    antigen_by_tick: dict[int, list[AntigenEvent]] = {}
    for event in antigen_events:
        antigen_by_tick.setdefault(event.arrival_tick, []).append(event)
    timeline = sorted(signals_by_tick.keys() | antigen_by_tick.keys())

    engine = Engine(cfg)
    for engine_tick, input_tick in enumerate(timeline):
        if input_tick in signals_by_tick:
            snapshot = map_to_snapshot(
                signals_by_tick[input_tick], mapping, tick=engine_tick
            )
            engine.deposit_signals(snapshot)
        for event in antigen_by_tick.get(input_tick, ()):
            engine.deposit_antigen(
                AntigenEvent(antigen_type=event.antigen_type, arrival_tick=engine_tick)
            )
        engine.step()
        if check_conservation:
            _audit_conservation(engine, engine_tick)
        if tick_interval:
            time.sleep(tick_interval)

    meta = RunMetadata(
        ticks=len(timeline),
        seed=cfg.rng_seed,
        config_digest=cfg.digest(),
        empty_migrations=engine.log.empty_migrations,
        overflow_count=engine.tissue.evicted_count,
    )
    return RunResult(
        report=compute_mcav(engine.log, meta),
        history=engine.history,
        accounting=engine.antigen_accounting(),
        engine=engine,
    )


def _audit_conservation(engine: Engine, engine_tick: int) -> None:
    acct = engine.antigen_accounting()
    held = acct["in_pool"] + acct["evicted"] + acct["in_stores"] + acct["presented"]
    if held != acct["deposited"]:
        raise DendricellError(
            f"antigen conservation violated after tick {engine_tick}: "
            f"{acct['deposited']} deposited but {held} accounted for ({acct})"
        )


def diagnostics_to_csv(history: list[TickStats]) -> str:
    lines = [DIAG_HEADER]
    lines.extend(
        f"{row.tick},{row.mean_csm!r},{row.mean_semi!r},{row.mean_mature!r},{row.migrations}"
        for row in history
    )
    return "\n".join(lines) + "\n"
