"""Tissue compartment, cell population loop, and migration to the lymph log.

The engine is a single-writer state machine. The caller deposits signal
snapshots and antigen events into the tissue, then calls step() once per
tick; each step updates every live cell exactly once in stable index order,
appends migrated cells' presentation records to the lymph log in that same
order, and replaces migrated cells after the full pass. Two engines built
from equal configs and fed equal deposit sequences produce identical lymph
logs, bit for bit.

Randomness is confined to migration-threshold draws from a single seeded
random.Random. Draw order is part of the determinism contract: one draw per
cell in index order at construction, then one per migrated cell in ascending
index after each tick's pass.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from dataclasses import dataclass, field
from statistics import fmean

from .errors import ConfigError, ParameterError, TickOrderError
from .model import (
    AntigenEvent,
    CellState,
    DendriticCell,
    OutputSignals,
    PresentationRecord,
    SignalSnapshot,
    WeightMatrix,
    assign_context,
    derive_weight_matrix,
    draw_migration_threshold,
    median_migration_threshold,
    process_signals,
)

__all__ = [
    "EngineConfig",
    "Tissue",
    "LymphLog",
    "TickStats",
    "Engine",
    "update_cell",
]


@dataclass(frozen=True)
class EngineConfig:
    """Engine parameters.

    threshold_scale multiplies the derived median migration threshold before
    the per-cell +-50% draw; 1.0 keeps the standard calibration, small values
    force short sampling windows, large values stretch them.
    """

    population_size: int = 100
    antigen_capacity: int = 50
    max_antigen_per_update: int = 1
    pool_capacity: int = 500
    w1: float = 2.0
    w2: float = 2.0
    signal_maxima: tuple[float, float, float] = (100.0, 100.0, 100.0)
    rng_seed: int = 0
    threshold_scale: float = 1.0

    def validate(self) -> None:
        for name in ("population_size", "antigen_capacity", "max_antigen_per_update", "pool_capacity"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.max_antigen_per_update > self.antigen_capacity:
            raise ConfigError(
                "max_antigen_per_update must not exceed antigen_capacity "
                f"({self.max_antigen_per_update} > {self.antigen_capacity})"
            )
        for name in ("w1", "w2", "threshold_scale"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f"{name} must be positive, got {value!r}")
        if len(self.signal_maxima) != 3:
            raise ConfigError("signal_maxima must have exactly three entries")
        for value in self.signal_maxima:
            if value < 0.0:
                raise ConfigError(f"signal_maxima entries must be >= 0, got {value!r}")
        if not any(self.signal_maxima):
            raise ConfigError("signal_maxima must not be all zero")

    def digest(self) -> str:
        """Stable 16-hex-char fingerprint of the engine parameters."""
        payload = {
            "population_size": self.population_size,
            "antigen_capacity": self.antigen_capacity,
            "max_antigen_per_update": self.max_antigen_per_update,
            "pool_capacity": self.pool_capacity,
            "w1": self.w1,
            "w2": self.w2,
            "signal_maxima": list(self.signal_maxima),
            "rng_seed": self.rng_seed,
            "threshold_scale": self.threshold_scale,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass
class Tissue:
    """Sampling compartment: one signal slot plus a bounded antigen FIFO."""

    pool_capacity: int
    current_signals: SignalSnapshot = field(default_factory=SignalSnapshot.zero)
    antigen_pool: deque[AntigenEvent] = field(default_factory=deque)
    tick: int = 0
    deposited_count: int = 0
    evicted_count: int = 0


@dataclass
class LymphLog:
    """Analysis compartment: append-only presentation records plus counters."""

    records: list[PresentationRecord] = field(default_factory=list)
    empty_migrations: int = 0


@dataclass(frozen=True)
class TickStats:
    """Per-tick diagnostics row for plotting."""

    tick: int
    mean_csm: float
    mean_semi: float
    mean_mature: float
    migrations: int


def update_cell(
    cell: DendriticCell,
    tissue: Tissue,
    weights: WeightMatrix,
    *,
    capacity: int,
    max_take: int,
    interim: OutputSignals | None = None,
) -> list[PresentationRecord] | None:
    """One update of a single immature cell against the tissue.

    In order: transfer up to min(max_take, remaining capacity) events from
    the pool front into the cell's store, add the current tick's interim
    outputs to the cell's cumulative sums, then test the migration threshold.
    Returns None while the cell stays immature, or the cell's presentation
    records (possibly empty) once it migrates; a migrated cell is left in its
    terminal state and must be replaced by the caller.

    interim may be precomputed by the caller; signals are tissue-global, so
    one process_signals result is shared by the whole population each tick.
    """
    if cell.state is not CellState.IMMATURE:
        raise ParameterError("update_cell requires an immature cell")
    take = min(max_take, capacity - len(cell.antigen_store), len(tissue.antigen_pool))
    for _ in range(take):
        cell.antigen_store.append(tissue.antigen_pool.popleft())
    if interim is None:
        interim = process_signals(tissue.current_signals, weights)
    cell.cumulative.accumulate(interim)
    if cell.cumulative.csm < cell.migration_threshold:
        return None
    context = assign_context(cell.cumulative)
    cell.state = CellState.MATURE if context == 1 else CellState.SEMI_MATURE
    lifespan = tissue.tick - cell.birth_tick + 1
    return [
        PresentationRecord(
            antigen_type=event.antigen_type,
            context=context,
            migration_tick=tissue.tick,
            cell_lifespan_ticks=lifespan,
        )
        for event in cell.antigen_store
    ]


class Engine:
    """The full system: tissue, cell population, and lymph log under one clock."""

    def __init__(self, cfg: EngineConfig):
        cfg.validate()
        self.cfg = cfg
        self.weights = derive_weight_matrix(cfg.w1, cfg.w2)
        max_p, max_d, max_s = cfg.signal_maxima
        base_median = median_migration_threshold(max_p, max_d, max_s, self.weights)
        self.t_median = cfg.threshold_scale * base_median
        self._rng = random.Random(cfg.rng_seed)
        self.tissue = Tissue(pool_capacity=cfg.pool_capacity)
        self.log = LymphLog()
        self.history: list[TickStats] = []
        self.steps_run = 0
        self.cells = [self._fresh_cell(birth_tick=0) for _ in range(cfg.population_size)]

    def _fresh_cell(self, birth_tick: int) -> DendriticCell:
        threshold = draw_migration_threshold(self.t_median, self._rng)
        return DendriticCell(migration_threshold=threshold, birth_tick=birth_tick)

    def deposit_signals(self, s: SignalSnapshot) -> None:
        """Replace the tissue's signal slot; cells see it at the next step.

        The snapshot tick must not be older than the tissue clock; the clock
        advances to the snapshot tick, so a later deposit at the same tick
        simply overwrites the slot.
        """
        if s.tick < self.tissue.tick:
            raise TickOrderError(
                f"stale snapshot tick {s.tick}, tissue clock is at {self.tissue.tick}"
            )
        max_p, max_d, max_s = self.cfg.signal_maxima
        for name, value, bound in (
            ("pamp", s.pamp, max_p),
            ("danger", s.danger, max_d),
            ("safe", s.safe, max_s),
        ):
            if value > bound:
                raise ParameterError(
                    f"{name}={value!r} exceeds the configured maximum {bound!r}"
                )
        self.tissue.current_signals = s
        self.tissue.tick = s.tick

    def deposit_antigen(self, event: AntigenEvent) -> None:
        """Append one antigen event; a full pool evicts its oldest event."""
        pool = self.tissue.antigen_pool
        if len(pool) == self.cfg.pool_capacity:
            pool.popleft()
            self.tissue.evicted_count += 1
        pool.append(event)
        self.tissue.deposited_count += 1

    def replace_cell(self, index: int) -> None:
        """Swap a migrated cell for a fresh immature one with a new threshold."""
        if self.cells[index].state is CellState.IMMATURE:
            raise ParameterError(f"cell {index} has not migrated")
        self.cells[index] = self._fresh_cell(birth_tick=self.tissue.tick)

    def step(self) -> TickStats:
        """Advance one tick: update every cell once, log migrations, replace.

        Replacement happens after the full population pass, so within a tick
        the update order only matters for pool consumption, which is served
        front-to-back in cell index order.
        """
        tissue = self.tissue
        interim = process_signals(tissue.current_signals, self.weights)
        migrated: list[int] = []
        for index, cell in enumerate(self.cells):
            records = update_cell(
                cell,
                tissue,
                self.weights,
                capacity=self.cfg.antigen_capacity,
                max_take=self.cfg.max_antigen_per_update,
                interim=interim,
            )
            if records is None:
                continue
            migrated.append(index)
            if records:
                self.log.records.extend(records)
            else:
                self.log.empty_migrations += 1
        tissue.tick += 1
        for index in migrated:
            self.replace_cell(index)
        stats = TickStats(
            tick=tissue.tick - 1,
            mean_csm=fmean(cell.cumulative.csm for cell in self.cells),
            mean_semi=fmean(cell.cumulative.semi for cell in self.cells),
            mean_mature=fmean(cell.cumulative.mature for cell in self.cells),
            migrations=len(migrated),
        )
        self.history.append(stats)
        self.steps_run += 1
        return stats

    def antigen_accounting(self) -> dict[str, int]:
        """Where every deposited antigen event currently is; the four right-hand
        buckets always sum to deposited_count."""
        in_stores = sum(len(cell.antigen_store) for cell in self.cells)
        return {
            "deposited": self.tissue.deposited_count,
            "in_pool": len(self.tissue.antigen_pool),
            "evicted": self.tissue.evicted_count,
            "in_stores": in_stores,
            "presented": len(self.log.records),
        }
