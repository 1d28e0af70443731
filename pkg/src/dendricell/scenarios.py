"""Synthetic seeded traces with known ground truth.

A scenario is a timeline split into contiguous phases, each with a signal
profile, plus a schedule saying which antigen types emit during which phases.
Ground truth marks a type anomalous exactly when every phase it emits in is
an attack phase; a type that also emits during normal or mixed activity is
labeled normal, because its events alone cannot implicate it.

Generated streams use the ingestion module's exact formats with metric names
equal to category names, so they replay like any external capture.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import ScenarioError
from .ingestion import (
    RawMetricRecord,
    serialize_antigen_stream,
    serialize_signal_stream,
)
from .model import AntigenEvent

__all__ = [
    "PROFILES",
    "Phase",
    "ScheduleEntry",
    "ScenarioSpec",
    "GeneratedScenario",
    "spec_from_dict",
    "generate",
]

PROFILES = ("normal", "attack", "mixed")


@dataclass(frozen=True)
class Phase:
    """Half-open tick interval [start_tick, end_tick) with one signal profile."""

    start_tick: int
    end_tick: int
    profile: str


@dataclass(frozen=True)
class ScheduleEntry:
    """One antigen type, the phase indices it is active in, and its rate.

    emission_rate is events per tick and may be fractional; a rate of 0.25
    emits one event every fourth active tick via a carry accumulator.
    """

    antigen_type: str
    active_phases: tuple[int, ...]
    emission_rate: float


@dataclass(frozen=True)
class ScenarioSpec:
    duration_ticks: int
    phases: tuple[Phase, ...]
    schedule: tuple[ScheduleEntry, ...]
    noise_amplitude: float = 0.0
    seed: int = 0

    def validate(self) -> None:
        if self.duration_ticks <= 0:
            raise ScenarioError(f"duration_ticks must be positive, got {self.duration_ticks}")
        if not self.phases:
            raise ScenarioError("at least one phase is required")
        expected_start = 0
        for i, phase in enumerate(self.phases):
            if phase.profile not in PROFILES:
                raise ScenarioError(f"phase {i}: unknown profile {phase.profile!r}")
            if phase.start_tick != expected_start:
                raise ScenarioError(
                    f"phase {i}: starts at {phase.start_tick}, expected {expected_start};"
                    " phases must be contiguous from tick 0"
                )
            if phase.end_tick <= phase.start_tick:
                raise ScenarioError(f"phase {i}: empty interval [{phase.start_tick}, {phase.end_tick})")
            expected_start = phase.end_tick
        if expected_start != self.duration_ticks:
            raise ScenarioError(
                f"phases end at {expected_start} but duration_ticks is {self.duration_ticks}"
            )
        seen: set[str] = set()
        for entry in self.schedule:
            if not entry.antigen_type:
                raise ScenarioError("empty antigen_type in schedule")
            if entry.antigen_type in seen:
                raise ScenarioError(f"duplicate schedule entry for {entry.antigen_type!r}")
            seen.add(entry.antigen_type)
            if not entry.active_phases:
                raise ScenarioError(f"{entry.antigen_type!r}: active_phases is empty")
            for index in entry.active_phases:
                if not 0 <= index < len(self.phases):
                    raise ScenarioError(
                        f"{entry.antigen_type!r}: phase index {index} out of range"
                    )
            if entry.emission_rate <= 0:
                raise ScenarioError(
                    f"{entry.antigen_type!r}: emission_rate must be > 0, got {entry.emission_rate}"
                )
        if self.noise_amplitude < 0:
            raise ScenarioError(f"noise_amplitude must be >= 0, got {self.noise_amplitude}")


@dataclass
class GeneratedScenario:
    spec: ScenarioSpec
    signal_records: list[RawMetricRecord]
    antigen_events: list[AntigenEvent]
    truth: dict[str, str] = field(default_factory=dict)

    def signal_text(self) -> str:
        return serialize_signal_stream(self.signal_records)

    def antigen_text(self) -> str:
        return serialize_antigen_stream(self.antigen_events)


def spec_from_dict(data: dict) -> ScenarioSpec:
    """Build a spec from a parsed config table; see README for the layout."""
    try:
        phases = tuple(
            Phase(
                start_tick=int(p["start"]),
                end_tick=int(p["end"]),
                profile=str(p["profile"]),
            )
            for p in data["phases"]
        )
        schedule = tuple(
            ScheduleEntry(
                antigen_type=str(e["type"]),
                active_phases=tuple(int(i) for i in e["phases"]),
                emission_rate=float(e["rate"]),
            )
            for e in data.get("antigen", [])
        )
        spec = ScenarioSpec(
            duration_ticks=int(data["duration_ticks"]),
            phases=phases,
            schedule=schedule,
            noise_amplitude=float(data.get("noise_amplitude", 0.0)),
            seed=int(data.get("seed", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"malformed scenario table: {exc}") from exc
    spec.validate()
    return spec


def _profile_values(profile: str, maxima: tuple[float, float, float]) -> tuple[float, float, float]:
    max_p, max_d, max_s = maxima
    if profile == "attack":
        return max_p, max_d, 0.0
    if profile == "normal":
        return 0.0, 0.0, max_s
    return max_p / 2.0, max_d / 2.0, max_s / 2.0


def generate(
    spec: ScenarioSpec,
    maxima: tuple[float, float, float] = (100.0, 100.0, 100.0),
) -> GeneratedScenario:
    """Emit seeded signal and antigen streams plus per-type ground truth.

    Deterministic per (spec, maxima): noise draws come from one private RNG
    in a fixed order (pamp, danger, safe per tick, skipped entirely when the
    amplitude is zero), so equal specs give byte-identical streams.
    """
    spec.validate()
    rng = random.Random(spec.seed)
    amp = spec.noise_amplitude

    phase_of_tick: list[int] = []
    for index, phase in enumerate(spec.phases):
        phase_of_tick.extend([index] * (phase.end_tick - phase.start_tick))

    signal_records: list[RawMetricRecord] = []
    antigen_events: list[AntigenEvent] = []
    carry = [0.0] * len(spec.schedule)
    for tick in range(spec.duration_ticks):
        phase = spec.phases[phase_of_tick[tick]]
        values = _profile_values(phase.profile, maxima)
        for name, value, cap in zip(("pamp", "danger", "safe"), values, maxima):
            if amp > 0.0:
                value = min(max(value + rng.uniform(-amp, amp), 0.0), cap)
            signal_records.append(RawMetricRecord(tick=tick, metric_name=name, value=value))
        for i, entry in enumerate(spec.schedule):
            if phase_of_tick[tick] not in entry.active_phases:
                continue
            carry[i] += entry.emission_rate
            while carry[i] >= 1.0:
                antigen_events.append(AntigenEvent(entry.antigen_type, arrival_tick=tick))
                carry[i] -= 1.0

    truth = {
        entry.antigen_type: (
            "anomalous"
            if all(spec.phases[i].profile == "attack" for i in entry.active_phases)
            else "normal"
        )
        for entry in spec.schedule
    }
    return GeneratedScenario(
        spec=spec,
        signal_records=signal_records,
        antigen_events=antigen_events,
        truth=truth,
    )
