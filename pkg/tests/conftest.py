"""Shared scenario builders for the test suite."""

from __future__ import annotations

import random
from dataclasses import replace

from dendricell import (
    EngineConfig,
    MCAVReport,
    Phase,
    ScenarioSpec,
    ScheduleEntry,
    spec_from_dict,
)


def pure_spec(profile: str, ticks: int = 10_000, seed: int = 0) -> ScenarioSpec:
    """One phase, one antigen type emitting once per tick."""
    return ScenarioSpec(
        duration_ticks=ticks,
        phases=(Phase(0, ticks, profile),),
        schedule=(ScheduleEntry("unit", (0,), 1.0),),
        noise_amplitude=0.0,
        seed=seed,
    )


def alternating_spec(
    n_phases: int,
    phase_len: int,
    seed: int,
    rate: float = 1.0,
    noise: float = 0.0,
) -> ScenarioSpec:
    """attack/normal/attack/... phases; scanner emits in attack phases,
    browser in normal phases, so ground truth is scanner=anomalous."""
    phases = tuple(
        Phase(i * phase_len, (i + 1) * phase_len, "attack" if i % 2 == 0 else "normal")
        for i in range(n_phases)
    )
    return ScenarioSpec(
        duration_ticks=n_phases * phase_len,
        phases=phases,
        schedule=(
            ScheduleEntry("scanner", tuple(range(0, n_phases, 2)), rate),
            ScheduleEntry("browser", tuple(range(1, n_phases, 2)), rate),
        ),
        noise_amplitude=noise,
        seed=seed,
    )


def random_instance(rng: random.Random) -> tuple[EngineConfig, ScenarioSpec]:
    """One small scenario plus a matching config, both drawn from rng."""
    n_phases = rng.randint(1, 4)
    lengths = [rng.randint(5, 120) for _ in range(n_phases)]
    phases = []
    start = 0
    for length in lengths:
        phases.append(
            {
                "start": start,
                "end": start + length,
                "profile": rng.choice(["attack", "normal", "mixed"]),
            }
        )
        start += length
    schedule = [
        {
            "type": f"type{i}",
            "phases": sorted(rng.sample(range(n_phases), rng.randint(1, n_phases))),
            "rate": rng.choice([0.2, 0.5, 1.0, 2.5, 6.0]),
        }
        for i in range(rng.randint(1, 4))
    ]
    spec = spec_from_dict(
        {
            "duration_ticks": start,
            "noise_amplitude": rng.choice([0.0, 4.0, 15.0]),
            "seed": rng.randint(0, 2**31),
            "phases": phases,
            "antigen": schedule,
        }
    )
    cfg = EngineConfig(
        population_size=rng.randint(1, 20),
        antigen_capacity=rng.randint(1, 8),
        max_antigen_per_update=1,
        pool_capacity=rng.randint(1, 40),
        w1=rng.choice([0.5, 1.0, 2.0, 3.5]),
        w2=rng.choice([0.5, 1.0, 2.0, 3.5]),
        rng_seed=rng.randint(0, 2**31),
        threshold_scale=rng.choice([0.05, 0.3, 1.0, 2.0]),
    )
    return replace(cfg, max_antigen_per_update=rng.randint(1, cfg.antigen_capacity)), spec


def mcav_of(report: MCAVReport, antigen_type: str) -> float:
    for entry in report.entries:
        if entry.antigen_type == antigen_type:
            return entry.mcav
    raise AssertionError(f"{antigen_type!r} not in report")


def mcav_gap(report: MCAVReport) -> float:
    return mcav_of(report, "scanner") - mcav_of(report, "browser")
