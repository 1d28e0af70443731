"""Aggregation of the lymph log into per-type anomaly coefficients.

The coefficient for an antigen type is the fraction of its presentations
that carried the mature (anomalous) context. Types that were never presented
have no defined ratio and are omitted; the run metadata's empty-migration
and overflow counters expose any lost coverage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engine import LymphLog
from .errors import ParameterError

__all__ = [
    "TypeStats",
    "RunMetadata",
    "MCAVReport",
    "compute_mcav",
    "classify",
    "report_to_csv",
    "report_to_json",
    "report_from_json",
]

CSV_HEADER = "antigen_type,antigen_count,mature_count,mcav,label"


@dataclass(frozen=True)
class TypeStats:
    """Presentation tally and coefficient for one antigen type."""

    antigen_type: str
    antigen_count: int
    mature_count: int
    mcav: float


@dataclass(frozen=True)
class RunMetadata:
    ticks: int
    seed: int
    config_digest: str
    empty_migrations: int
    overflow_count: int


@dataclass(frozen=True)
class MCAVReport:
    """Per-type coefficients (sorted by antigen_type) plus run metadata."""

    entries: tuple[TypeStats, ...]
    meta: RunMetadata | None = None


def compute_mcav(log: LymphLog, meta: RunMetadata | None = None) -> MCAVReport:
    """Tally mature presentations per type over the whole log.

    Order-insensitive: any permutation of the records gives the same report.
    An empty log yields an empty report.
    """
    antigen_counts: dict[str, int] = {}
    mature_counts: dict[str, int] = {}
    for record in log.records:
        antigen_counts[record.antigen_type] = antigen_counts.get(record.antigen_type, 0) + 1
        if record.context == 1:
            mature_counts[record.antigen_type] = mature_counts.get(record.antigen_type, 0) + 1
    entries = tuple(
        TypeStats(
            antigen_type=antigen_type,
            antigen_count=antigen_counts[antigen_type],
            mature_count=mature_counts.get(antigen_type, 0),
            mcav=mature_counts.get(antigen_type, 0) / antigen_counts[antigen_type],
        )
        for antigen_type in sorted(antigen_counts)
    )
    return MCAVReport(entries=entries, meta=meta)


def classify(report: MCAVReport, anomaly_threshold: float = 0.5) -> dict[str, str]:
    """Label each type anomalous when its coefficient reaches the threshold.

    The bound is inclusive: mcav == threshold reads as anomalous.
    """
    if not 0.0 <= anomaly_threshold <= 1.0:
        raise ParameterError(
            f"anomaly_threshold must lie in [0, 1], got {anomaly_threshold!r}"
        )
    return {
        entry.antigen_type: "anomalous" if entry.mcav >= anomaly_threshold else "normal"
        for entry in report.entries
    }


def report_to_csv(report: MCAVReport, labels: dict[str, str]) -> str:
    lines = [CSV_HEADER]
    for entry in report.entries:
        if "," in entry.antigen_type or "\n" in entry.antigen_type:
            raise ParameterError(
                f"antigen_type {entry.antigen_type!r} cannot be written to CSV"
            )
        lines.append(
            f"{entry.antigen_type},{entry.antigen_count},{entry.mature_count},"
            f"{entry.mcav!r},{labels[entry.antigen_type]}"
        )
    return "\n".join(lines) + "\n"


def report_to_json(report: MCAVReport, labels: dict[str, str]) -> str:
    payload: dict = {
        "entries": [
            {
                "antigen_type": entry.antigen_type,
                "antigen_count": entry.antigen_count,
                "mature_count": entry.mature_count,
                "mcav": entry.mcav,
                "label": labels[entry.antigen_type],
            }
            for entry in report.entries
        ]
    }
    if report.meta is not None:
        payload["meta"] = {
            "ticks": report.meta.ticks,
            "seed": report.meta.seed,
            "config_digest": report.meta.config_digest,
            "empty_migrations": report.meta.empty_migrations,
            "overflow_count": report.meta.overflow_count,
        }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def report_from_json(text: str) -> tuple[MCAVReport, dict[str, str]]:
    """Inverse of report_to_json; returns the report and its labels."""
    payload = json.loads(text)
    entries = tuple(
        TypeStats(
            antigen_type=item["antigen_type"],
            antigen_count=item["antigen_count"],
            mature_count=item["mature_count"],
            mcav=item["mcav"],
        )
        for item in payload["entries"]
    )
    labels = {item["antigen_type"]: item["label"] for item in payload["entries"]}
    meta = None
    if "meta" in payload:
        raw = payload["meta"]
        meta = RunMetadata(
            ticks=raw["ticks"],
            seed=raw["seed"],
            config_digest=raw["config_digest"],
            empty_migrations=raw["empty_migrations"],
            overflow_count=raw["overflow_count"],
        )
    return MCAVReport(entries=entries, meta=meta), labels
