"""dendricell: population-based anomaly scoring over paired event streams.

A population of sampling agents fuses four normalized signal categories into
cumulative output values while collecting antigen events from a shared pool;
each agent's migration ends its sampling window and stamps everything it
holds with a binary context. Per-type mature-context fractions (mcav) then
rank antigen types by how consistently they co-occurred with anomalous
signals.
"""

from .analysis import (
    MCAVReport,
    RunMetadata,
    TypeStats,
    classify,
    compute_mcav,
    report_from_json,
    report_to_csv,
    report_to_json,
)
from .config import RunConfig, load_run_config, load_scenario
from .engine import Engine, EngineConfig, LymphLog, TickStats, Tissue, update_cell
from .errors import (
    ConfigError,
    DendricellError,
    ParameterError,
    ScenarioError,
    StreamError,
    TickOrderError,
)
from .ingestion import (
    MetricRule,
    RawMetricRecord,
    SignalMapping,
    identity_mapping,
    map_to_snapshot,
    parse_antigen_stream,
    parse_signal_stream,
    serialize_antigen_stream,
    serialize_signal_stream,
)
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
from .oracle import oracle_run
from .runner import RunResult, diagnostics_to_csv, run_replay
from .scenarios import (
    GeneratedScenario,
    Phase,
    ScenarioSpec,
    ScheduleEntry,
    generate,
    spec_from_dict,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AntigenEvent",
    "CellState",
    "ConfigError",
    "DendricellError",
    "DendriticCell",
    "Engine",
    "EngineConfig",
    "GeneratedScenario",
    "LymphLog",
    "MCAVReport",
    "MetricRule",
    "OutputSignals",
    "ParameterError",
    "Phase",
    "PresentationRecord",
    "RawMetricRecord",
    "RunConfig",
    "RunMetadata",
    "RunResult",
    "ScenarioError",
    "ScenarioSpec",
    "ScheduleEntry",
    "SignalMapping",
    "SignalSnapshot",
    "StreamError",
    "TickOrderError",
    "TickStats",
    "Tissue",
    "TypeStats",
    "WeightMatrix",
    "assign_context",
    "classify",
    "compute_mcav",
    "derive_weight_matrix",
    "diagnostics_to_csv",
    "draw_migration_threshold",
    "generate",
    "identity_mapping",
    "load_run_config",
    "load_scenario",
    "map_to_snapshot",
    "median_migration_threshold",
    "oracle_run",
    "parse_antigen_stream",
    "parse_signal_stream",
    "process_signals",
    "report_from_json",
    "report_to_csv",
    "report_to_json",
    "run_replay",
    "serialize_antigen_stream",
    "serialize_signal_stream",
    "spec_from_dict",
    "update_cell",
]
