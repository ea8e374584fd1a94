"""End-to-end wiring of the pipeline stages.

Stage boundaries are files (records in, records out) so human review can
interpose between generation and verbalization; this module provides the
in-process equivalents the CLI subcommands call.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .conflicts import (
    ConflictSpec,
    MULTI_HOP,
    PerturbationGroup,
    Provenance,
    SINGLE_HOP,
    SurfaceTriplet,
    assemble_instance,
    generate_multi_hop_fallback,
    generate_single_hop_fallback,
    surface_form,
)
from .errors import ConflictInfeasibleError, GroupIndependenceError, UnlocatableGroupError
from .extractor import ExtractionConfig, Subgraph, extract, sample_seed
from .gateway import ModelRequest
from .harness import (
    DetectionResult,
    ScoreSheet,
    build_detection_prompt,
    parse_detection_response,
    score_instance,
    whitespace_token_count,
)
from .kgstore import KnowledgeGraph, Triplet
from .records import BenchmarkRecord
from .registry import RelationRegistry
from .verbalizer import (
    GoldPair,
    VerbalizedContext,
    coverage_check,
    locate_gold_sentences,
    template_verbalize,
)

# Dataset quota per conflict-type cell, single-hop 1..4 then multi-hop 1..4.
DEFAULT_QUOTA = {
    "SingleHop-1": 208,
    "SingleHop-2": 154,
    "SingleHop-3": 80,
    "SingleHop-4": 50,
    "MultiHop-1": 300,
    "MultiHop-2": 158,
    "MultiHop-3": 80,
    "MultiHop-4": 50,
}


# --------------------------------------------------------------------------
# Conflict generation over extracted subgraphs (rule-based offline path)


def generate_groups(
    graph: KnowledgeGraph,
    subgraph: Subgraph,
    registry: RelationRegistry,
    rng: random.Random,
    n_conflicts: int,
    prefer_multi_hop: bool = True,
) -> list[PerturbationGroup]:
    """Up to n_conflicts independent groups over one subgraph: the seed gets
    a multi-hop chain when a pattern applies, further whitelisted edges get
    single-hop perturbations."""
    groups: list[PerturbationGroup] = []
    used_originals: set[tuple[str, str, str]] = set()
    used_slots: set[tuple[str, str]] = set()

    candidates = [subgraph.seed] + [
        t for t in subgraph.edges if t != subgraph.seed and t.relation in registry
    ]
    for seed in candidates:
        if len(groups) >= n_conflicts:
            break
        if seed.as_tuple() in used_originals:
            continue
        group: Optional[PerturbationGroup] = None
        if prefer_multi_hop and not groups:
            try:
                group = generate_multi_hop_fallback(graph, seed, subgraph, registry, rng)
            except ConflictInfeasibleError:
                group = None
        if group is None:
            try:
                group = generate_single_hop_fallback(graph, seed, registry, rng)
            except ConflictInfeasibleError:
                continue
        slots = {(t.subject, t.relation) for t in group.replacement_triplets}
        if slots & used_slots:
            continue
        groups.append(group)
        used_originals.update(t.as_tuple() for t in group.original_triplets)
        used_slots |= slots
    return groups


# --------------------------------------------------------------------------
# Context assembly


def assemble_contexts(
    spec: ConflictSpec,
    graph: KnowledgeGraph,
    registry: RelationRegistry,
    rng: random.Random,
) -> tuple[VerbalizedContext, VerbalizedContext, list[GoldPair]]:
    """Template-verbalize the original subgraph (context A) and the perturbed
    edge list (context B), then derive gold conflicting sentence pairs."""
    originals = {t.as_tuple(): g for g in spec.groups for t in g.original_triplets}

    statements_a = [surface_form(t, graph, registry) for t in spec.subgraph.edges]
    statements_b: list[SurfaceTriplet] = []
    emitted_groups: set[int] = set()
    group_index = {id(g): i for i, g in enumerate(spec.groups)}
    for t in spec.subgraph.edges:
        g = originals.get(t.as_tuple())
        if g is None:
            statements_b.append(surface_form(t, graph, registry))
        else:
            gi = group_index[id(g)]
            if gi not in emitted_groups:
                statements_b.extend(g.replacement_triplets)
                emitted_groups.add(gi)

    ctx_a = template_verbalize(statements_a, registry, random.Random(rng.randrange(1 << 30)))
    ctx_b = template_verbalize(statements_b, registry, random.Random(rng.randrange(1 << 30)))
    gold = locate_gold_sentences(
        ctx_a, ctx_b, spec, aliases=graph.entity_aliases, registry=registry, graph=graph
    )
    return ctx_a, ctx_b, gold


def build_record(
    spec: ConflictSpec,
    graph: KnowledgeGraph,
    registry: RelationRegistry,
    rng: random.Random,
    instance_id: str,
) -> BenchmarkRecord:
    ctx_a, ctx_b, gold = assemble_contexts(spec, graph, registry, rng)

    subgraph_surfaces = [surface_form(t, graph, registry) for t in spec.subgraph.edges]
    conflict_surfaces_a = [
        surface_form(t, graph, registry) for g in spec.groups for t in g.original_triplets
    ]
    conflict_surfaces_b = [t for g in spec.groups for t in g.replacement_triplets]

    report_a = coverage_check(
        conflict_surfaces_a, subgraph_surfaces, ctx_a, graph.entity_aliases, registry
    )
    perturbed_surfaces = [
        s
        for s in subgraph_surfaces
        if s.as_tuple() not in {o.as_tuple() for o in conflict_surfaces_a}
    ] + conflict_surfaces_b
    report_b = coverage_check(
        conflict_surfaces_b, perturbed_surfaces, ctx_b, graph.entity_aliases, registry
    )

    relations = sorted({t.relation for g in spec.groups for t in g.original_triplets})
    domains = sorted(spec.subgraph.domains)
    return BenchmarkRecord(
        id=instance_id,
        conflict_type=spec.conflict_type.key,
        context_a=ctx_a.text,
        context_b=ctx_b.text,
        seed_triplets=[list(spec.subgraph.seed.as_tuple())],
        groups=[g.to_dict() for g in spec.groups],
        subgraph_triplets=[list(t.as_tuple()) for t in spec.subgraph.edges],
        gold_pairs=[g.to_dict() for g in gold],
        domains=domains,
        relations=relations,
        coverage={"context_a": report_a.to_dict(), "context_b": report_b.to_dict()},
        provenance={
            **spec.provenance.to_dict(),
            "verbalizer": "template",
            "pipeline_version": 1,
        },
    )


def run_offline_generation(
    graph: KnowledgeGraph,
    registry: RelationRegistry,
    n_instances: int,
    rng_seed: int = 0,
    extraction: Optional[ExtractionConfig] = None,
    max_conflicts: int = 4,
    prefer_multi_hop: bool = True,
) -> list[BenchmarkRecord]:
    """Fixture KG -> extract -> fallback-generate -> template-verbalize."""
    extraction = extraction or ExtractionConfig()
    records: list[BenchmarkRecord] = []
    attempts = 0
    rng = random.Random(rng_seed)
    while len(records) < n_instances and attempts < n_instances * 20:
        attempts += 1
        task_rng = random.Random(rng_seed ^ (attempts * 0x9E3779B9))
        try:
            seed = sample_seed(graph, registry, task_rng)
            subgraph = extract(graph, seed, extraction, task_rng, registry)
            wanted = rng.randint(1, max_conflicts)
            groups = generate_groups(
                graph, subgraph, registry, task_rng, wanted, prefer_multi_hop
            )
            if not groups:
                continue
            spec = assemble_instance(subgraph, groups, Provenance(generator="rule"))
            record = build_record(
                spec, graph, registry, task_rng, f"inst-{len(records) + 1:05d}"
            )
        except (ConflictInfeasibleError, GroupIndependenceError, UnlocatableGroupError):
            continue
        records.append(record)
    return records


# --------------------------------------------------------------------------
# Stub dataset (histogram/quota fixtures)


def generate_stub_dataset(quota: Optional[dict[str, int]] = None) -> list[BenchmarkRecord]:
    """Minimal valid records honoring a per-conflict-type quota."""
    quota = quota or DEFAULT_QUOTA
    records = []
    for conflict_type, count in quota.items():
        hop, _, n_text = conflict_type.partition("-")
        n = int(n_text)
        for i in range(count):
            rid = f"stub-{conflict_type}-{i + 1:04d}"
            groups = []
            gold = []
            for gi in range(n):
                orig = (f"S{gi}", "P22", f"O{gi}")
                if hop == MULTI_HOP:
                    repl = [
                        SurfaceTriplet(f"S{gi}", "borders", f"M{gi}").to_dict(),
                        SurfaceTriplet(f"M{gi}", "contains", f"O{gi}").to_dict(),
                    ]
                else:
                    repl = [SurfaceTriplet(f"S{gi}", "is the father of", f"X{gi}").to_dict()]
                groups.append(
                    {
                        "original_triplets": [list(orig)],
                        "replacement_triplets": repl,
                        "hop_class": hop,
                    }
                )
                gold.append(
                    GoldPair((gi,), (gi,), (f"sentence a{gi}.",), (f"sentence b{gi}.",)).to_dict()
                )
            records.append(
                BenchmarkRecord(
                    id=rid,
                    conflict_type=conflict_type,
                    context_a=" ".join(f"Sentence a{g}." for g in range(n)),
                    context_b=" ".join(f"Sentence b{g}." for g in range(n)),
                    groups=groups,
                    gold_pairs=gold,
                    provenance={"generator": "stub"},
                )
            )
    return records


# --------------------------------------------------------------------------
# Evaluation


def evaluate_records(
    records: Sequence[BenchmarkRecord],
    gateway,
    model_name: str = "offline",
    strategy: str = "multi_step",
    agg: str = "all_runs",
    threshold: float = 0.6,
    runs: int = 3,
    transcript: Optional[list] = None,
) -> list[ScoreSheet]:
    sheets = []
    for record in records:
        prompt = build_detection_prompt(record.context_a, record.context_b, strategy)
        results: list[DetectionResult] = []
        for run_index in range(runs):
            response = gateway.complete(
                ModelRequest(model_name=model_name, user_text=prompt, run_index=run_index)
            )
            result = parse_detection_response(response.text, strategy)
            results.append(result)
            if transcript is not None:
                transcript.append(
                    {
                        "instance_id": record.id,
                        "run_index": run_index,
                        "raw": response.text,
                        "parse_status": result.parse_status,
                    }
                )
        gold = record.gold()
        if strategy == "binary" or not gold:
            # Binary prompting yields identification only; no localization.
            detected = [r.detected and r.parse_status != "failed" for r in results]
            id_score = int(all(detected)) if agg == "all_runs" else int(any(detected))
            loc_score = 0
        else:
            id_score, loc_score = score_instance(results, gold, agg, threshold)
        sheets.append(
            ScoreSheet(
                instance_id=record.id,
                id_score=id_score,
                loc_score=loc_score,
                runs=results,
                conflict_type=record.conflict_type,
                domains=tuple(record.domains),
                relations=tuple(record.relations),
                domain_count=len(record.domains),
                parametric_split=str(record.extras.get("parametric_split", "")),
            )
        )
    return sheets


def perfect_responder(records: Sequence[BenchmarkRecord], strategy: str = "multi_step") -> Callable:
    """Scripted responder producing the ideal answer for each record's prompt
    (used by the mock-model evaluation path)."""
    by_prompt: dict[str, str] = {}
    for record in records:
        prompt = build_detection_prompt(record.context_a, record.context_b, strategy)
        if strategy == "binary":
            by_prompt[prompt] = "Yes"
            continue
        gold = record.gold()
        if not gold:
            by_prompt[prompt] = "No conflicts"
            continue
        lines = [f"Conflicts: {len(gold)}"]
        for i, pair in enumerate(gold, 1):
            lines.append(f"Conflict {i}:")
            lines.append("- Reason: the two contexts state incompatible facts")
            lines.append(f'- Sentence A: "{pair.a_texts[0].strip()}"')
            lines.append(f'- Sentence B: "{pair.b_texts[0].strip()}"')
        by_prompt[prompt] = "\n".join(lines)

    def responder(request: ModelRequest) -> str:
        if request.user_text in by_prompt:
            return by_prompt[request.user_text]
        return "No conflicts"

    return responder


def attach_length_bins(records: Sequence[BenchmarkRecord], sheets: Sequence[ScoreSheet], k: int = 4):
    from .harness import length_bins

    pairs = [(r.id, whitespace_token_count(r.context_a) + whitespace_token_count(r.context_b)) for r in records]
    assignment = length_bins(pairs, k)
    for sheet in sheets:
        sheet.length_bin = assignment.get(sheet.instance_id, "")
    return sheets
