"""Smoke tests for the _tovo extension module."""

import os

import pytest

import _tovo


def test_package_wraps_extension():
    import tovo

    assert tovo.__version__ == _tovo.__version__
    assert len(tovo.builtin_registry()) == 52


def test_builtin_registry_counts():
    registry = _tovo.builtin_registry()
    assert len(registry) == 52
    by_source = {}
    for metric in registry.metrics():
        by_source[metric.source] = by_source.get(metric.source, 0) + 1
    assert by_source[_tovo.MetricSource.LlamaGuard2] == 11
    assert by_source[_tovo.MetricSource.OAIM] == 11
    assert by_source[_tovo.MetricSource.PerspectiveAPI] == 6
    assert by_source[_tovo.MetricSource.BeaverTails] == 14
    assert by_source[_tovo.MetricSource.OOD] == 10


def test_assignment_is_seed_deterministic():
    registry = _tovo.builtin_registry()
    a = _tovo.assign_metrics(registry, "s1", 1, 6, 42)
    b = _tovo.assign_metrics(registry, "s1", 1, 6, 42)
    assert a.metric_ids == b.metric_ids
    assert 1 <= len(a.metric_ids) <= 6
    assert len(set(a.metric_ids)) == len(a.metric_ids)


def test_majority_vote():
    assert _tovo.aggregate_votes([("a", 1), ("b", 1), ("c", 0)]) == 1
    assert _tovo.aggregate_votes([("a", 0), ("b", 0), ("c", 0)]) == 0
    with pytest.raises(_tovo.TovoError):
        _tovo.aggregate_votes([("a", 1), ("b", 0)])


def test_parse_verdict_synonyms():
    verdict = _tovo.parse_verdict("hate | yes | hostile\ntoxicity | safe | fine",
                                  ["hate", "toxicity"])
    assert verdict.status == _tovo.VerdictStatus.ok
    assert verdict.labels == {"hate": 1, "toxicity": 0}


def test_consensus_micro_macro():
    a = _tovo.LabelSource()
    b = _tovo.LabelSource()
    a.add("s1", "m1", 0)
    b.add("s1", "m1", 0)
    a.add("s2", "m1", 1)
    b.add("s2", "m1", 0)
    for i in range(6):
        a.add(f"t{i}", "m2", 1)
        b.add(f"t{i}", "m2", 1)
    report = _tovo.consensus(a, b)
    assert report.overall_micro == 87.5
    assert report.overall_macro == 75.0
    assert _tovo.format_rate(report.overall_micro) == "87.500"


def test_unsafe_f1_fixture():
    pred = _tovo.LabelSource()
    gold = _tovo.LabelSource()
    for sample, p, g in [("s1", 1, 1), ("s2", 1, 1), ("s3", 1, 0), ("s4", 0, 1), ("s5", 0, 0)]:
        pred.add(sample, "m", p)
        gold.add(sample, "m", g)
    result = _tovo.unsafe_f1(pred, gold)
    assert result.tp == 2 and result.fp == 1 and result.fn == 1
    assert abs(result.f1 - 2 / 3) < 1e-12


def test_synthetic_vote_perfect_judges():
    truth = _tovo.plant_truth(200, ["m"], 0.5, 7)
    specs = [_tovo.SyntheticJudgeSpec(j, 1.0) for j in ("a", "b", "c")]
    run = _tovo.run_synthetic_vote(specs, truth, 3, 8)
    assert run.gold_accuracy == 100.0
    assert all(entry.rate == 100.0 for entry in run.consensus.values())


def test_dataset_round_trip(tmp_path):
    line = _tovo.GoldRecord.from_line  # record construction goes through JSON
    record = line(
        '{"labels":{"hate":1},"metrics":[{"definition_version":1,"metric_id":"hate"}],'
        '"provenance":{"empty_rationale":[],"panel":{"judge_ids":["a","b","c"],"rng_seed":1,'
        '"sample_id":"s1"},"run_id":"r","seeds":{"root":1},"template_id":"reasoning-v1",'
        '"timestamps":{}},"rationales":{"hate":{"judge_id":"a","text":"why"}},'
        '"sample":{"conversation":{"id":"s1","origin":"single_turn","turns":[{"role":"user",'
        '"text":"q"},{"role":"assistant","text":"r"}]},"id":"s1","response":"r",'
        '"responder_id":"x"},"tovo_schema":1}')
    path = os.fspath(tmp_path / "ds.jsonl")
    assert _tovo.emit([record], path) == 1
    loaded = _tovo.load(path)
    assert loaded.quarantined == 0
    assert len(loaded.records) == 1
    assert loaded.records[0].labels == {"hate": 1}
    assert loaded.records[0].to_line() == record.to_line()


def test_split_counts():
    records = []
    base = None
    for i in range(10):
        line = (
            '{"labels":{"hate":%d},"metrics":[{"definition_version":1,"metric_id":"hate"}],'
            '"provenance":{"empty_rationale":[],"panel":{"judge_ids":["a","b","c"],"rng_seed":1,'
            '"sample_id":"s%d"},"run_id":"r","seeds":{"root":1},"template_id":"t",'
            '"timestamps":{}},"rationales":{"hate":{"judge_id":"a","text":"why"}},'
            '"sample":{"conversation":{"id":"s%d","origin":"single_turn","turns":[{"role":"user",'
            '"text":"q"},{"role":"assistant","text":"r"}]},"id":"s%d","response":"r",'
            '"responder_id":"x"},"tovo_schema":1}') % (i % 2, i, i, i)
        records.append(_tovo.GoldRecord.from_line(line))
    parts = _tovo.split(records, {"train": 0.8, "test": 0.2}, 3)
    assert len(parts["train"]) == 8
    assert len(parts["test"]) == 2
