import random
from collections import Counter

import pytest

from kgconflict.conflicts import Provenance, assemble_instance
from kgconflict.extractor import ExtractionConfig, extract
from kgconflict.gateway import ScriptedGateway
from kgconflict.pipeline import (
    DEFAULT_QUOTA,
    assemble_contexts,
    attach_length_bins,
    build_record,
    evaluate_records,
    generate_groups,
    generate_stub_dataset,
    perfect_responder,
    run_offline_generation,
)
from kgconflict.records import dataset_stats


def _spec(graph, registry, rng_seed=0, n_conflicts=1):
    rng = random.Random(rng_seed)
    seed = next(t for t in graph.triplets if t.relation == "P150")
    sg = extract(graph, seed, ExtractionConfig(depth_range=(3, 3)), rng, registry)
    groups = generate_groups(graph, sg, registry, rng, n_conflicts)
    assert groups
    return assemble_instance(sg, groups, Provenance("rule"))


def test_generate_groups_prefers_multi_hop_first(geo_graph, registry):
    spec = _spec(geo_graph, registry, n_conflicts=2)
    assert spec.groups[0].hop_class == "MultiHop"


def test_assemble_contexts_replaces_originals(geo_graph, registry):
    spec = _spec(geo_graph, registry)
    ctx_a, ctx_b, gold = assemble_contexts(spec, geo_graph, registry, random.Random(0))
    original = spec.groups[0].original_triplets[0]
    label = geo_graph.entity_label(original.object)
    # the replaced fact appears in A's gold sentences, the chain in B's
    assert len(gold) == len(spec.groups)
    assert any(label in t for t in gold[0].a_texts)
    assert ctx_a.text != ctx_b.text


def test_build_record_coverage_is_complete(geo_graph, registry):
    spec = _spec(geo_graph, registry, n_conflicts=2)
    record = build_record(spec, geo_graph, registry, random.Random(1), "x-1")
    record.validate()
    for side in ("context_a", "context_b"):
        assert record.coverage[side]["conflict_covered"]
        assert record.coverage[side]["subgraph_coverage_ratio"] == 1.0
    assert record.conflict_type == spec.conflict_type.key
    assert record.domains == ["Geography"]


def test_run_offline_generation_deterministic(geo_graph, registry):
    a = run_offline_generation(geo_graph, registry, n_instances=5, rng_seed=9)
    b = run_offline_generation(geo_graph, registry, n_instances=5, rng_seed=9)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]
    c = run_offline_generation(geo_graph, registry, n_instances=5, rng_seed=10)
    assert [r.id for r in a] == [r.id for r in c]  # ids are positional
    assert [r.context_a for r in a] != [r.context_a for r in c]


def test_stub_dataset_matches_quota():
    records = generate_stub_dataset()
    counts = dataset_stats(records)["by_conflict_type"]
    assert counts == DEFAULT_QUOTA
    assert len(records) == 1080
    for r in records[:20]:
        r.validate()


def test_stub_dataset_custom_quota():
    records = generate_stub_dataset({"SingleHop-2": 3, "MultiHop-4": 2})
    assert Counter(r.conflict_type for r in records) == {"SingleHop-2": 3, "MultiHop-4": 2}
    assert all(len(r.groups) == len(r.gold_pairs) for r in records)


def test_evaluate_with_perfect_responder(geo_graph, registry):
    records = run_offline_generation(geo_graph, registry, n_instances=6, rng_seed=2)
    gateway = ScriptedGateway(responder=perfect_responder(records))
    sheets = evaluate_records(records, gateway)
    assert all(s.id_score == 1 and s.loc_score == 1 for s in sheets)
    assert len(gateway.calls) == len(records) * 3  # three runs each
    assert {c.run_index for c in gateway.calls} == {0, 1, 2}


def test_evaluate_with_silent_model(geo_graph, registry):
    records = run_offline_generation(geo_graph, registry, n_instances=3, rng_seed=2)
    gateway = ScriptedGateway(default="No conflicts")
    sheets = evaluate_records(records, gateway)
    assert all(s.id_score == 0 and s.loc_score == 0 for s in sheets)


def test_evaluate_binary_strategy_has_no_loc(geo_graph, registry):
    records = run_offline_generation(geo_graph, registry, n_instances=3, rng_seed=2)
    gateway = ScriptedGateway(default="Yes")
    sheets = evaluate_records(records, gateway, strategy="binary")
    assert all(s.id_score == 1 and s.loc_score == 0 for s in sheets)


def test_attach_length_bins(geo_graph, registry):
    records = run_offline_generation(geo_graph, registry, n_instances=5, rng_seed=3)
    gateway = ScriptedGateway(default="No conflicts")
    sheets = evaluate_records(records, gateway)
    attach_length_bins(records, sheets, k=2)
    assert {s.length_bin for s in sheets} <= {"Q1", "Q2"}
    assert all(s.length_bin for s in sheets)


def test_evaluate_transcript_capture(geo_graph, registry):
    records = run_offline_generation(geo_graph, registry, n_instances=2, rng_seed=4)
    transcript = []
    evaluate_records(records, ScriptedGateway(default="No conflicts"), transcript=transcript)
    assert len(transcript) == len(records) * 3
    assert {t["parse_status"] for t in transcript} == {"clean"}
