"""Per-cell model: signal transduction, context assignment, migration thresholds.

A dendritic cell fuses four tissue signal categories (pamp, danger, safe,
inflammation) into three cumulative outputs through a fixed-ratio weighted
sum. The costimulatory output (csm) is compared against a per-cell migration
threshold to end the cell's sampling life; the semi-mature and mature outputs
decide the binary context the cell stamps on every antigen it presents.

Everything here is a pure function over plain value types, safe to call from
any thread. All arithmetic is double precision with no compensated summation,
so independent re-implementations that follow the same operation order agree
bit for bit.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field

from .errors import ConfigError, ParameterError

__all__ = [
    "CellState",
    "SignalSnapshot",
    "WeightMatrix",
    "OutputSignals",
    "AntigenEvent",
    "DendriticCell",
    "PresentationRecord",
    "derive_weight_matrix",
    "process_signals",
    "assign_context",
    "median_migration_threshold",
    "draw_migration_threshold",
]


class CellState(enum.Enum):
    """Lifecycle state of a cell; leaves immature only by crossing its threshold."""

    IMMATURE = "immature"
    SEMI_MATURE = "semi_mature"
    MATURE = "mature"


@dataclass(frozen=True)
class SignalSnapshot:
    """The tissue's per-category signal aggregates at one tick.

    Each of pamp/danger/safe is the pre-summed aggregate over that category's
    member metrics, already normalized into [0, category maximum] by
    ingestion. Inflammation is a dimensionless amplifier with no upper bound
    of its own.
    """

    pamp: float
    danger: float
    safe: float
    inflammation: float
    tick: int

    def __post_init__(self):
        for name in ("pamp", "danger", "safe", "inflammation"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ParameterError(f"{name} must be finite and >= 0, got {value!r}")
        if self.tick < 0:
            raise ParameterError(f"tick must be >= 0, got {self.tick}")

    @classmethod
    def zero(cls, tick: int = 0) -> "SignalSnapshot":
        return cls(0.0, 0.0, 0.0, 0.0, tick)


@dataclass(frozen=True)
class WeightMatrix:
    """Transduction weights, fully determined by the two base weights.

    Rows are the three outputs, columns are (pamp, danger, safe):

        csm    = ( w1,  w1/2,  w1*1.5)
        semi   = (  0,     0,      1 )
        mature = ( w2,  w2/2, -w2*1.5)

    The derived entries are computed, never stored, so the row ratios hold by
    construction. Safe input suppresses the mature output (negative weight)
    while still driving csm and semi upward.
    """

    w1: float
    w2: float

    @property
    def csm(self) -> tuple[float, float, float]:
        return (self.w1, self.w1 / 2.0, self.w1 * 1.5)

    @property
    def semi(self) -> tuple[float, float, float]:
        return (0.0, 0.0, 1.0)

    @property
    def mature(self) -> tuple[float, float, float]:
        return (self.w2, self.w2 / 2.0, -(self.w2 * 1.5))


@dataclass
class OutputSignals:
    """One cell's three output signals, cumulative over its sampling life."""

    csm: float = 0.0
    semi: float = 0.0
    mature: float = 0.0

    def accumulate(self, interim: "OutputSignals") -> None:
        self.csm += interim.csm
        self.semi += interim.semi
        self.mature += interim.mature


@dataclass(frozen=True)
class AntigenEvent:
    """One antigen instance: an opaque type token plus its arrival tick."""

    antigen_type: str
    arrival_tick: int

    def __post_init__(self):
        if not self.antigen_type:
            raise ParameterError("antigen_type must be non-empty")
        if self.arrival_tick < 0:
            raise ParameterError(f"arrival_tick must be >= 0, got {self.arrival_tick}")


@dataclass
class DendriticCell:
    """One sampling agent: cumulative outputs, antigen store, threshold, state."""

    migration_threshold: float
    birth_tick: int = 0
    state: CellState = CellState.IMMATURE
    cumulative: OutputSignals = field(default_factory=OutputSignals)
    antigen_store: list[AntigenEvent] = field(default_factory=list)


@dataclass(frozen=True)
class PresentationRecord:
    """One presented antigen: its type, the presenting cell's context, and timing."""

    antigen_type: str
    context: int
    migration_tick: int
    cell_lifespan_ticks: int


def derive_weight_matrix(w1: float, w2: float) -> WeightMatrix:
    """Build the weight matrix from the two base weights.

    Both must be positive and finite; the fixed row ratios do the rest.
    """
    for name, value in (("w1", w1), ("w2", w2)):
        if not math.isfinite(value) or value <= 0.0:
            raise ParameterError(f"{name} must be positive and finite, got {value!r}")
    return WeightMatrix(w1=float(w1), w2=float(w2))


def process_signals(s: SignalSnapshot, w: WeightMatrix) -> OutputSignals:
    """One tick's interim outputs: weighted sum per row, amplified by (1 + inflammation).

    Inflammation scales the whole sum for every row, so it can shorten cell
    lifespans but never flips the semi/mature balance on its own.
    """
    amp = 1.0 + s.inflammation
    cp, cd, cs = w.csm
    sp, sd, ss = w.semi
    mp, md, ms = w.mature
    return OutputSignals(
        csm=(s.pamp * cp + s.danger * cd + s.safe * cs) * amp,
        semi=(s.pamp * sp + s.danger * sd + s.safe * ss) * amp,
        mature=(s.pamp * mp + s.danger * md + s.safe * ms) * amp,
    )


def assign_context(cumulative: OutputSignals) -> int:
    """Binary context of a migrated cell: 0 when semi exceeds mature, else 1.

    Ties fall to 1; only a strictly greater semi output reads as normal.
    """
    return 0 if cumulative.semi > cumulative.mature else 1


def median_migration_threshold(
    max_p: float, max_d: float, max_s: float, w: WeightMatrix
) -> float:
    """Median threshold: half the csm response to all categories at their maxima.

    Calibrated so a cell sampling signals at half maximum lives about two
    ticks. Inflammation is deliberately excluded. All-zero maxima would force
    every cell to migrate on its first tick and are rejected.
    """
    for name, value in (("max_p", max_p), ("max_d", max_d), ("max_s", max_s)):
        if not math.isfinite(value) or value < 0.0:
            raise ParameterError(f"{name} must be finite and >= 0, got {value!r}")
    if max_p == 0.0 and max_d == 0.0 and max_s == 0.0:
        raise ConfigError(
            "signal_maxima are all zero; every migration threshold would be 0"
        )
    wp, wd, ws = w.csm
    return 0.5 * (max_p * wp + max_d * wd + max_s * ws)


def draw_migration_threshold(t_median: float, rng: random.Random) -> float:
    """Draw one threshold uniformly from the band [0.5, 1.5] * t_median.

    Consumes exactly one draw from rng, which keeps replay sequences aligned
    across implementations.
    """
    if not math.isfinite(t_median) or t_median <= 0.0:
        raise ParameterError(f"t_median must be positive and finite, got {t_median!r}")
    return rng.uniform(0.5 * t_median, 1.5 * t_median)
