import random

import pytest
from hypothesis import given, settings, strategies as st

from kgconflict.errors import NoEligibleSeedError, SeedNotInGraphError
from kgconflict.extractor import (
    ExtractionConfig,
    Subgraph,
    extract,
    sample_seed,
    validate_constraints,
)
from kgconflict.kgstore import KnowledgeGraph, Triplet

from conftest import make_geo_graph


def test_config_validation():
    with pytest.raises(ValueError):
        ExtractionConfig(max_edges=0)
    with pytest.raises(ValueError):
        ExtractionConfig(max_edges_per_node=0)
    with pytest.raises(ValueError):
        ExtractionConfig(depth_range=(3, 2))
    with pytest.raises(ValueError):
        ExtractionConfig(depth_range=(0, 2))


def test_seed_not_in_graph(tiny_graph):
    with pytest.raises(SeedNotInGraphError):
        extract(tiny_graph, Triplet("Q9", "P22", "Q1"), ExtractionConfig(), random.Random(0))


def test_sample_seed_uses_whitelist_only(tiny_graph, registry):
    seen = {sample_seed(tiny_graph, registry, random.Random(i)).relation for i in range(50)}
    assert seen <= {"P22", "P25"}


def test_sample_seed_no_eligible(registry):
    g = KnowledgeGraph([Triplet("A", "PX999", "B")])
    with pytest.raises(NoEligibleSeedError):
        sample_seed(g, registry, random.Random(0))


def test_seed_edge_always_kept(tiny_graph):
    seed = Triplet("Q1", "P25", "Q4")
    sg = extract(tiny_graph, seed, ExtractionConfig(), random.Random(0))
    assert sg.edges[0] == seed


def test_depth_one_limits_to_seed_incident_edges(chain_graph):
    seed = Triplet("N10", "P47", "N11")
    sg = extract(chain_graph, seed, ExtractionConfig(depth_range=(1, 1)), random.Random(3))
    # the seed subject is expanded at depth 0 only: every edge touches N10
    assert all("N10" in (t.subject, t.object) for t in sg.edges)
    assert sg.depth_used == 1


def test_per_node_cap_on_star(star_graph):
    seed = star_graph.triplets[0]
    sg = extract(
        star_graph, seed, ExtractionConfig(max_edges_per_node=5, depth_range=(4, 4)),
        random.Random(1),
    )
    assert len(sg.edges) == 5  # center capped at 5 of its 9 edges
    assert validate_constraints(sg, ExtractionConfig(max_edges_per_node=5)) == []


def test_max_edges_cap_on_long_chain(chain_graph):
    seed = Triplet("N0", "P47", "N1")
    sg = extract(
        chain_graph, seed, ExtractionConfig(max_edges=15, depth_range=(25, 25)),
        random.Random(0),
    )
    assert len(sg.edges) == 15


def test_deterministic_under_fixed_seed(geo_graph, registry):
    config = ExtractionConfig()
    a = extract(geo_graph, geo_graph.triplets[0], config, random.Random(42), registry)
    b = extract(geo_graph, geo_graph.triplets[0], config, random.Random(42), registry)
    assert a.edges == b.edges
    assert a.depth_used == b.depth_used


def test_different_seeds_usually_differ(geo_graph):
    config = ExtractionConfig(depth_range=(3, 5))
    results = {
        extract(geo_graph, geo_graph.triplets[0], config, random.Random(i)).edges
        for i in range(10)
    }
    assert len(results) > 1


def test_domains_collected_from_registry(geo_graph, registry):
    sg = extract(geo_graph, geo_graph.triplets[0], ExtractionConfig(), random.Random(0), registry)
    assert sg.domains <= {"Geography"}
    assert sg.domains  # P150/P47 are both Geography


def test_subgraph_round_trip(geo_graph, registry):
    sg = extract(geo_graph, geo_graph.triplets[0], ExtractionConfig(), random.Random(0), registry)
    again = Subgraph.from_dict(sg.to_dict())
    assert again.edges == sg.edges
    assert again.seed == sg.seed
    assert again.domains == sg.domains


def test_validate_constraints_flags_violations():
    config = ExtractionConfig(max_edges=2, max_edges_per_node=1)
    sg = Subgraph(
        seed=Triplet("A", "P1", "B"),
        edges=(Triplet("A", "P1", "B"), Triplet("A", "P1", "C"), Triplet("X", "P1", "Y")),
        per_node_edge_count={},
        depth_used=1,
    )
    names = {v.constraint for v in validate_constraints(sg, config)}
    assert names == {"max_edges", "max_edges_per_node", "connectivity"}


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    max_edges=st.integers(1, 20),
    cap=st.integers(1, 6),
    depth=st.integers(1, 6),
)
def test_extraction_always_satisfies_constraints(seed, max_edges, cap, depth):
    graph = make_geo_graph(n_regions=12, n_towns=30, seed=5)
    config = ExtractionConfig(
        max_edges=max_edges, max_edges_per_node=cap, depth_range=(depth, depth)
    )
    rng = random.Random(seed)
    triplet = graph.triplets[rng.randrange(len(graph.triplets))]
    sg = extract(graph, triplet, config, rng)
    violations = validate_constraints(sg, config)
    # the seed edge is exempt from caps; anything beyond it must comply
    if len(sg.edges) > 1:
        assert violations == [], [v.detail for v in violations]
    assert len(sg.edges) <= max(max_edges, 1)
