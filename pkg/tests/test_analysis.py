"""Lymph-log aggregation, classification, and report serialization."""

from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dendricell import (
    MCAVReport,
    ParameterError,
    PresentationRecord,
    RunMetadata,
    TypeStats,
    classify,
    compute_mcav,
    report_from_json,
    report_to_csv,
    report_to_json,
)
from dendricell.engine import LymphLog


def rec(antigen_type: str, context: int) -> PresentationRecord:
    return PresentationRecord(
        antigen_type=antigen_type, context=context, migration_tick=0, cell_lifespan_ticks=1
    )


record_lists = st.lists(
    st.builds(
        rec,
        st.sampled_from(["a", "b", "c", "d"]),
        st.integers(min_value=0, max_value=1),
    ),
    max_size=60,
)


def test_mcav_hand_tally():
    log = LymphLog(records=[rec("A", 1), rec("A", 0), rec("A", 1), rec("B", 0)])
    report = compute_mcav(log)
    assert [
        (e.antigen_type, e.antigen_count, e.mature_count, e.mcav) for e in report.entries
    ] == [("A", 3, 2, 2 / 3), ("B", 1, 0, 0.0)]


def test_mcav_empty_log():
    assert compute_mcav(LymphLog()).entries == ()


def test_mcav_entries_sorted_by_type():
    log = LymphLog(records=[rec("zeta", 1), rec("alpha", 0), rec("mid", 1)])
    assert [e.antigen_type for e in compute_mcav(log).entries] == ["alpha", "mid", "zeta"]


@given(record_lists)
def test_mcav_is_order_insensitive(records):
    forward = compute_mcav(LymphLog(records=list(records)))
    backward = compute_mcav(LymphLog(records=list(reversed(records))))
    assert forward == backward


@given(record_lists, record_lists)
def test_mcav_tallies_merge_additively(first, second):
    merged = compute_mcav(LymphLog(records=list(first) + list(second)))
    separate = [compute_mcav(LymphLog(records=list(part))) for part in (first, second)]
    for entry in merged.entries:
        counts = [0, 0]
        for part in separate:
            for e in part.entries:
                if e.antigen_type == entry.antigen_type:
                    counts[0] += e.antigen_count
                    counts[1] += e.mature_count
        assert (entry.antigen_count, entry.mature_count) == tuple(counts)


@given(record_lists)
def test_mcav_bounds(records):
    report = compute_mcav(LymphLog(records=list(records)))
    for entry in report.entries:
        assert 0 <= entry.mature_count <= entry.antigen_count
        assert 0.0 <= entry.mcav <= 1.0


def test_classify_threshold_is_inclusive():
    report = MCAVReport(
        entries=(
            TypeStats("low", 4, 1, 0.25),
            TypeStats("edge", 2, 1, 0.5),
            TypeStats("high", 4, 3, 0.75),
        )
    )
    assert classify(report, 0.5) == {"low": "normal", "edge": "anomalous", "high": "anomalous"}
    assert classify(report, 0.8) == {"low": "normal", "edge": "normal", "high": "normal"}


@pytest.mark.parametrize("bad", [-0.1, 1.1])
def test_classify_rejects_out_of_range_threshold(bad):
    with pytest.raises(ParameterError):
        classify(MCAVReport(entries=()), bad)


def test_csv_rendering_is_exact():
    report = compute_mcav(LymphLog(records=[rec("A", 1), rec("A", 0), rec("A", 1), rec("B", 0)]))
    text = report_to_csv(report, classify(report))
    assert text == (
        "antigen_type,antigen_count,mature_count,mcav,label\n"
        "A,3,2,0.6666666666666666,anomalous\n"
        "B,1,0,0.0,normal\n"
    )


def test_csv_rejects_unwritable_type():
    report = MCAVReport(entries=(TypeStats("a,b", 1, 0, 0.0),))
    with pytest.raises(ParameterError):
        report_to_csv(report, {"a,b": "normal"})


def test_json_round_trip_with_metadata():
    meta = RunMetadata(
        ticks=42, seed=7, config_digest="ab" * 8, empty_migrations=3, overflow_count=1
    )
    report = compute_mcav(
        LymphLog(records=[rec("A", 1), rec("B", 0), rec("B", 1)]), meta
    )
    labels = classify(report)
    text = report_to_json(report, labels)
    assert text.endswith("\n")
    parsed = json.loads(text)
    assert list(parsed) == sorted(parsed)
    back, back_labels = report_from_json(text)
    assert back == report
    assert back_labels == labels


def test_json_without_metadata_omits_the_key():
    report = compute_mcav(LymphLog(records=[rec("A", 1)]))
    payload = json.loads(report_to_json(report, classify(report)))
    assert "meta" not in payload
    back, _ = report_from_json(report_to_json(report, classify(report)))
    assert back.meta is None
