"""Stream parsing and normalization of raw metrics into the four categories.

Input formats (UTF-8 text, one record per line-feed-terminated line):

    signal stream:   tick,metric_name,value
    antigen stream:  tick,antigen_type

Ticks are non-negative integers and must be non-decreasing within a stream.
Each metric is normalized by a declared transform and summed into its target
category; per-category sums for pamp/danger/safe are clamped to the engine's
configured maxima so snapshots always satisfy their invariants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import ConfigError, ParameterError, StreamError
from .model import AntigenEvent, SignalSnapshot

__all__ = [
    "RawMetricRecord",
    "MetricRule",
    "SignalMapping",
    "identity_mapping",
    "parse_signal_stream",
    "parse_antigen_stream",
    "serialize_signal_stream",
    "serialize_antigen_stream",
    "map_to_snapshot",
]

CATEGORIES = ("pamp", "danger", "safe", "inflammation")
TRANSFORMS = ("linear", "inverse_linear")


@dataclass(frozen=True)
class MetricRule:
    """How one raw metric becomes a category contribution.

    linear:          clamp(scale * value, 0, clamp_max)
    inverse_linear:  clamp(scale * (value - pivot), 0, clamp_max)

    The pivot encodes the expected baseline, so inverse_linear turns
    "sufficiently above the expected value" into a positive contribution.
    """

    category: str
    transform: str
    scale: float
    clamp_max: float
    pivot: float = 0.0

    def __post_init__(self):
        if self.category not in CATEGORIES:
            raise ConfigError(f"unknown category {self.category!r}")
        if self.transform not in TRANSFORMS:
            raise ConfigError(f"unknown transform {self.transform!r}")
        if not math.isfinite(self.scale):
            raise ConfigError(f"scale must be finite, got {self.scale!r}")
        if not math.isfinite(self.clamp_max) or self.clamp_max < 0.0:
            raise ConfigError(f"clamp_max must be finite and >= 0, got {self.clamp_max!r}")

    def apply(self, value: float) -> float:
        if self.transform == "linear":
            raw = self.scale * value
        else:
            raw = self.scale * (value - self.pivot)
        return min(max(raw, 0.0), self.clamp_max)


@dataclass
class SignalMapping:
    """Per-metric rules plus the category maxima they are clamped against."""

    rules: dict[str, MetricRule]
    maxima: tuple[float, float, float] = (100.0, 100.0, 100.0)


def identity_mapping(maxima: tuple[float, float, float]) -> SignalMapping:
    """Pass-through mapping for streams whose metrics are already category values.

    Covers pamp, danger, and safe under their own names; an inflammation
    metric has no implicit rule and must be declared explicitly.
    """
    max_p, max_d, max_s = maxima
    rules = {
        "pamp": MetricRule("pamp", "linear", 1.0, max_p),
        "danger": MetricRule("danger", "linear", 1.0, max_d),
        "safe": MetricRule("safe", "linear", 1.0, max_s),
    }
    return SignalMapping(rules=rules, maxima=maxima)


@dataclass(frozen=True)
class RawMetricRecord:
    tick: int
    metric_name: str
    value: float


def _iter_lines(source: Iterable[str] | str) -> Iterable[str]:
    if isinstance(source, str):
        return source.splitlines()
    return source


def parse_signal_stream(source: Iterable[str] | str) -> list[RawMetricRecord]:
    """Parse "tick,metric_name,value" lines; blank lines are skipped.

    Raises StreamError naming the line and field on any malformed input,
    including a tick that goes backwards.
    """
    records: list[RawMetricRecord] = []
    last_tick = -1
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise StreamError(line_no, f"expected tick,metric_name,value, got {line!r}")
        tick = _parse_tick(parts[0], line_no)
        if tick < last_tick:
            raise StreamError(line_no, f"tick {tick} is lower than preceding tick {last_tick}")
        last_tick = tick
        name = parts[1].strip()
        if not name:
            raise StreamError(line_no, "empty metric_name field")
        try:
            value = float(parts[2])
        except ValueError:
            raise StreamError(line_no, f"value field {parts[2]!r} is not a number") from None
        if not math.isfinite(value):
            raise StreamError(line_no, f"value field {parts[2]!r} is not finite")
        records.append(RawMetricRecord(tick=tick, metric_name=name, value=value))
    return records


def parse_antigen_stream(source: Iterable[str] | str) -> list[AntigenEvent]:
    """Parse "tick,antigen_type" lines in stream order; blank lines are skipped.

    Repeated types are kept as distinct events: antigen are instances of a
    type, never uniqued.
    """
    events: list[AntigenEvent] = []
    last_tick = -1
    for line_no, line in enumerate(_iter_lines(source), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise StreamError(line_no, f"expected tick,antigen_type, got {line!r}")
        tick = _parse_tick(parts[0], line_no)
        if tick < last_tick:
            raise StreamError(line_no, f"tick {tick} is lower than preceding tick {last_tick}")
        last_tick = tick
        antigen_type = parts[1].strip()
        if not antigen_type:
            raise StreamError(line_no, "empty antigen_type field")
        events.append(AntigenEvent(antigen_type=antigen_type, arrival_tick=tick))
    return events


def _parse_tick(token: str, line_no: int) -> int:
    try:
        tick = int(token)
    except ValueError:
        raise StreamError(line_no, f"tick field {token!r} is not an integer") from None
    if tick < 0:
        raise StreamError(line_no, f"tick must be >= 0, got {tick}")
    return tick


def serialize_signal_stream(records: Iterable[RawMetricRecord]) -> str:
    # repr keeps float round-trips exact, so parse(serialize(x)) == x.
    return "".join(f"{r.tick},{r.metric_name},{r.value!r}\n" for r in records)


def serialize_antigen_stream(events: Iterable[AntigenEvent]) -> str:
    return "".join(f"{e.arrival_tick},{e.antigen_type}\n" for e in events)


def map_to_snapshot(
    records: list[RawMetricRecord],
    mapping: SignalMapping,
    tick: int | None = None,
) -> SignalSnapshot:
    """Transform, sum, and clamp one tick's records into a snapshot.

    All records must share one tick. Categories with no contributing metric
    default to 0; in particular an absent inflammation means no amplification.
    The snapshot tick may be overridden, which replay uses to restamp input
    ticks onto the engine clock.
    """
    if records:
        shared = records[0].tick
        for record in records:
            if record.tick != shared:
                raise ParameterError(
                    f"records span ticks {shared} and {record.tick}; one tick expected"
                )
        if tick is None:
            tick = shared
    elif tick is None:
        tick = 0
    sums = {category: 0.0 for category in CATEGORIES}
    for record in records:
        rule = mapping.rules.get(record.metric_name)
        if rule is None:
            raise ConfigError(f"metric {record.metric_name!r} has no mapping entry")
        sums[rule.category] += rule.apply(record.value)
    max_p, max_d, max_s = mapping.maxima
    return SignalSnapshot(
        pamp=min(sums["pamp"], max_p),
        danger=min(sums["danger"], max_d),
        safe=min(sums["safe"], max_s),
        inflammation=sums["inflammation"],
        tick=tick,
    )
