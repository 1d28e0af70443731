"""Reference oracle: a flat, single-pass re-implementation of the pipeline.

This module exists to catch engine bugs, so it deliberately avoids the
engine's code: cells are parallel lists, the math is inlined, and the only
shared pieces are the frozen value types, the ingestion transforms, and the
report containers. It must agree with the engine field for field on any
seeded input, which pins down every semantic choice (update order, RNG draw
order, tie-breaks, pool accounting) rather than just the happy path.

Kept intentionally sequential and allocation-light; no attempt at the
engine's diagnostics or incremental API.
"""

from __future__ import annotations

import random
from collections import deque

from .analysis import MCAVReport, RunMetadata, TypeStats
from .engine import EngineConfig
from .ingestion import RawMetricRecord, SignalMapping, identity_mapping, map_to_snapshot
from .model import AntigenEvent

__all__ = ["oracle_run"]


def oracle_run(
    cfg: EngineConfig,
    signal_records: list[RawMetricRecord],
    antigen_events: list[AntigenEvent],
    mapping: SignalMapping | None = None,
) -> MCAVReport:
    """Replay both streams and return the per-type coefficient report.

    One engine tick per distinct input tick across the two streams, in
    ascending order. Deterministic in (cfg, inputs): thresholds come from a
    single seeded generator, drawn once per cell at start and once per
    replacement in ascending cell index.
    """
    cfg.validate()
    if mapping is None:
        mapping = identity_mapping(cfg.signal_maxima)

    # Both algorithm weight rows, spelled out from the two base weights.
    w1, w2 = cfg.w1, cfg.w2
    cp, cd, cs = w1, w1 / 2.0, w1 * 1.5
    sp, sd, ss = 0.0, 0.0, 1.0
    mp, md, ms = w2, w2 / 2.0, -(w2 * 1.5)

    max_p, max_d, max_s = cfg.signal_maxima
    t_median = cfg.threshold_scale * (0.5 * (max_p * cp + max_d * cd + max_s * cs))
    rng = random.Random(cfg.rng_seed)

    n = cfg.population_size
    thresholds = [rng.uniform(0.5 * t_median, 1.5 * t_median) for _ in range(n)]
    acc_csm = [0.0] * n
    acc_semi = [0.0] * n
    acc_mature = [0.0] * n
    stores: list[list[str]] = [[] for _ in range(n)]

    signals_by_tick: dict[int, list[RawMetricRecord]] = {}
    for record in signal_records:
        signals_by_tick.setdefault(record.tick, []).append(record)
    antigen_by_tick: dict[int, list[AntigenEvent]] = {}
    for event in antigen_events:
        antigen_by_tick.setdefault(event.arrival_tick, []).append(event)
    timeline = sorted(signals_by_tick.keys() | antigen_by_tick.keys())

    pool: deque[str] = deque()
    evicted = 0
    empty_migrations = 0
    antigen_counts: dict[str, int] = {}
    mature_counts: dict[str, int] = {}
    pamp = danger = safe = inflammation = 0.0

    for engine_tick, input_tick in enumerate(timeline):
        if input_tick in signals_by_tick:
            snap = map_to_snapshot(signals_by_tick[input_tick], mapping, tick=engine_tick)
            pamp, danger, safe = snap.pamp, snap.danger, snap.safe
            inflammation = snap.inflammation
        for event in antigen_by_tick.get(input_tick, ()):
            if len(pool) == cfg.pool_capacity:
                pool.popleft()
                evicted += 1
            pool.append(event.antigen_type)

        amp = 1.0 + inflammation
        interim_csm = (pamp * cp + danger * cd + safe * cs) * amp
        interim_semi = (pamp * sp + danger * sd + safe * ss) * amp
        interim_mature = (pamp * mp + danger * md + safe * ms) * amp

        migrated: list[int] = []
        for i in range(n):
            take = min(
                cfg.max_antigen_per_update,
                cfg.antigen_capacity - len(stores[i]),
                len(pool),
            )
            for _ in range(take):
                stores[i].append(pool.popleft())
            acc_csm[i] += interim_csm
            acc_semi[i] += interim_semi
            acc_mature[i] += interim_mature
            if acc_csm[i] < thresholds[i]:
                continue
            migrated.append(i)
            if not stores[i]:
                empty_migrations += 1
                continue
            context = 0 if acc_semi[i] > acc_mature[i] else 1
            for antigen_type in stores[i]:
                antigen_counts[antigen_type] = antigen_counts.get(antigen_type, 0) + 1
                if context == 1:
                    mature_counts[antigen_type] = mature_counts.get(antigen_type, 0) + 1

        for i in migrated:
            thresholds[i] = rng.uniform(0.5 * t_median, 1.5 * t_median)
            acc_csm[i] = acc_semi[i] = acc_mature[i] = 0.0
            stores[i] = []

    entries = tuple(
        TypeStats(
            antigen_type=antigen_type,
            antigen_count=antigen_counts[antigen_type],
            mature_count=mature_counts.get(antigen_type, 0),
            mcav=mature_counts.get(antigen_type, 0) / antigen_counts[antigen_type],
        )
        for antigen_type in sorted(antigen_counts)
    )
    meta = RunMetadata(
        ticks=len(timeline),
        seed=cfg.rng_seed,
        config_digest=cfg.digest(),
        empty_migrations=empty_migrations,
        overflow_count=evicted,
    )
    return MCAVReport(entries=entries, meta=meta)
