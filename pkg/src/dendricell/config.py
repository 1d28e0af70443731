"""Run configuration: everything a full experiment needs, in one TOML file.

Layout (all tables optional except an input source):

    [engine]          EngineConfig fields
    [run]             anomaly_threshold, out, format, live, tick_interval
    [inputs]          signals = "path", antigen = "path" ("-" reads stdin)
    [[mapping]]       metric, category, transform, scale, clamp_max, pivot
    [scenario]        duration_ticks, seed, noise_amplitude,
                      [[scenario.phases]] start/end/profile,
                      [[scenario.antigen]] type/phases/rate

Exactly one input source must be selected: both stream paths, or a scenario.
from_dict(to_dict(cfg)) reproduces cfg exactly, so configs can be captured
from running experiments.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from .engine import EngineConfig
from .errors import ConfigError
from .ingestion import MetricRule, SignalMapping
from .scenarios import ScenarioSpec, spec_from_dict

__all__ = [
    "RunConfig",
    "from_dict",
    "to_dict",
    "load_run_config",
    "load_scenario",
    "read_toml",
]

FORMATS = ("csv", "json")


@dataclass
class RunConfig:
    engine: EngineConfig
    signals_path: str | None = None
    antigen_path: str | None = None
    scenario: ScenarioSpec | None = None
    mapping_rules: dict[str, MetricRule] | None = None
    anomaly_threshold: float = 0.5
    out_path: str | None = None
    out_format: str = "csv"
    live: bool = False
    tick_interval: float = 1.0

    def validate(self) -> None:
        self.engine.validate()
        if self.scenario is not None:
            self.scenario.validate()
            if self.signals_path is not None or self.antigen_path is not None:
                raise ConfigError(
                    "two input sources selected: a scenario and stream paths"
                )
        else:
            if self.signals_path is None and self.antigen_path is None:
                raise ConfigError("no input source: give stream paths or a scenario")
            if self.signals_path is None or self.antigen_path is None:
                raise ConfigError("stream input needs both a signals and an antigen path")
            if self.signals_path == "-" and self.antigen_path == "-":
                raise ConfigError("only one stream can read stdin")
        if self.out_format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.out_format!r}")
        if not 0.0 <= self.anomaly_threshold <= 1.0:
            raise ConfigError(
                f"anomaly_threshold must lie in [0, 1], got {self.anomaly_threshold!r}"
            )
        if self.tick_interval <= 0.0:
            raise ConfigError(f"tick_interval must be positive, got {self.tick_interval!r}")

    def resolved_out(self) -> str:
        return self.out_path if self.out_path is not None else f"report.{self.out_format}"

    def signal_mapping(self) -> SignalMapping | None:
        """The declared mapping, or None to use the pass-through default."""
        if self.mapping_rules is None:
            return None
        return SignalMapping(rules=dict(self.mapping_rules), maxima=self.engine.signal_maxima)


def _engine_from_table(table: dict) -> EngineConfig:
    known = {f.name for f in fields(EngineConfig)}
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"unknown engine keys: {sorted(unknown)}")
    kwargs = dict(table)
    if "signal_maxima" in kwargs:
        maxima = kwargs["signal_maxima"]
        if not isinstance(maxima, (list, tuple)) or len(maxima) != 3:
            raise ConfigError("signal_maxima must be a list of three numbers")
        kwargs["signal_maxima"] = tuple(float(v) for v in maxima)
    return EngineConfig(**kwargs)


def _mapping_from_list(items: list) -> dict[str, MetricRule]:
    rules: dict[str, MetricRule] = {}
    for item in items:
        try:
            metric = str(item["metric"])
            rule = MetricRule(
                category=str(item["category"]),
                transform=str(item["transform"]),
                scale=float(item["scale"]),
                clamp_max=float(item["clamp_max"]),
                pivot=float(item.get("pivot", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed mapping entry {item!r}: {exc}") from exc
        if metric in rules:
            raise ConfigError(f"duplicate mapping entry for metric {metric!r}")
        rules[metric] = rule
    return rules


def from_dict(data: dict) -> RunConfig:
    engine = _engine_from_table(data.get("engine", {}))
    run = data.get("run", {})
    inputs = data.get("inputs", {})
    scenario = None
    if "scenario" in data:
        scenario = spec_from_dict(data["scenario"])
    mapping_rules = None
    if "mapping" in data:
        mapping_rules = _mapping_from_list(data["mapping"])
    cfg = RunConfig(
        engine=engine,
        signals_path=inputs.get("signals"),
        antigen_path=inputs.get("antigen"),
        scenario=scenario,
        mapping_rules=mapping_rules,
        anomaly_threshold=float(run.get("anomaly_threshold", 0.5)),
        out_path=run.get("out"),
        out_format=str(run.get("format", "csv")),
        live=bool(run.get("live", False)),
        tick_interval=float(run.get("tick_interval", 1.0)),
    )
    return cfg


def to_dict(cfg: RunConfig) -> dict:
    data: dict = {
        "engine": {
            "population_size": cfg.engine.population_size,
            "antigen_capacity": cfg.engine.antigen_capacity,
            "max_antigen_per_update": cfg.engine.max_antigen_per_update,
            "pool_capacity": cfg.engine.pool_capacity,
            "w1": cfg.engine.w1,
            "w2": cfg.engine.w2,
            "signal_maxima": list(cfg.engine.signal_maxima),
            "rng_seed": cfg.engine.rng_seed,
            "threshold_scale": cfg.engine.threshold_scale,
        },
        "run": {
            "anomaly_threshold": cfg.anomaly_threshold,
            "format": cfg.out_format,
            "live": cfg.live,
            "tick_interval": cfg.tick_interval,
        },
    }
    if cfg.out_path is not None:
        data["run"]["out"] = cfg.out_path
    inputs = {}
    if cfg.signals_path is not None:
        inputs["signals"] = cfg.signals_path
    if cfg.antigen_path is not None:
        inputs["antigen"] = cfg.antigen_path
    if inputs:
        data["inputs"] = inputs
    if cfg.mapping_rules is not None:
        data["mapping"] = [
            {
                "metric": metric,
                "category": rule.category,
                "transform": rule.transform,
                "scale": rule.scale,
                "clamp_max": rule.clamp_max,
                "pivot": rule.pivot,
            }
            for metric, rule in cfg.mapping_rules.items()
        ]
    if cfg.scenario is not None:
        data["scenario"] = {
            "duration_ticks": cfg.scenario.duration_ticks,
            "noise_amplitude": cfg.scenario.noise_amplitude,
            "seed": cfg.scenario.seed,
            "phases": [
                {"start": p.start_tick, "end": p.end_tick, "profile": p.profile}
                for p in cfg.scenario.phases
            ],
            "antigen": [
                {
                    "type": e.antigen_type,
                    "phases": list(e.active_phases),
                    "rate": e.emission_rate,
                }
                for e in cfg.scenario.schedule
            ],
        }
    return data


def read_toml(path: str) -> dict:
    try:
        with open(path, "rb") as handle:
            return tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path} is not valid TOML: {exc}") from exc


def load_run_config(path: str) -> RunConfig:
    return from_dict(read_toml(path))


def load_scenario(path: str) -> ScenarioSpec:
    """Load a standalone scenario file (the [scenario] table keys at top level)."""
    return spec_from_dict(read_toml(path))
