import random

import pytest

from kgconflict.kgstore import KnowledgeGraph, Triplet
from kgconflict.registry import default_registry


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture
def tiny_graph():
    # Q1 -P22-> Q2 -P22-> Q3, Q1 -P25-> Q4
    triplets = [
        Triplet("Q1", "P22", "Q2"),
        Triplet("Q2", "P22", "Q3"),
        Triplet("Q1", "P25", "Q4"),
    ]
    aliases = {
        "Q1": ["alan"],
        "Q2": ["bert"],
        "Q3": ["carl"],
        "Q4": ["dora"],
        "Q5": ["edna"],  # isolated: aliased but no edges
    }
    return KnowledgeGraph(triplets, aliases)


@pytest.fixture
def star_graph():
    """One center with 9 incident edges; per-node cap of 5 must prune it."""
    triplets = [Triplet("C", "P47", f"L{i}") for i in range(9)]
    return KnowledgeGraph(triplets)


@pytest.fixture
def chain_graph():
    """20-edge path; the max_edges=15 cap must truncate traversal."""
    triplets = [Triplet(f"N{i}", "P47", f"N{i + 1}") for i in range(20)]
    return KnowledgeGraph(triplets)


def make_geo_graph(n_regions=40, n_towns=120, seed=7):
    """Synthetic geography graph: a border ring of regions, each containing
    towns. Rich enough for both multi-hop reroutes and object substitution."""
    rng = random.Random(seed)
    triplets = []
    aliases = {}
    for i in range(n_regions):
        aliases[f"R{i}"] = [f"region {i}"]
    for i in range(n_towns):
        aliases[f"T{i}"] = [f"town {i}"]
        triplets.append(Triplet(f"R{rng.randrange(n_regions)}", "P150", f"T{i}"))
    for i in range(n_regions):
        triplets.append(Triplet(f"R{i}", "P47", f"R{(i + 1) % n_regions}"))
    return KnowledgeGraph(triplets, aliases)


@pytest.fixture
def geo_graph():
    return make_geo_graph()


@pytest.fixture
def tocantins_graph():
    triplets = [
        Triplet("Q303", "P150", "Q970"),  # tocantins contains novo jardim
        Triplet("Q303", "P47", "Q42824"),  # tocantins borders mato grosso
    ]
    aliases = {
        "Q303": ["tocantins (state)"],
        "Q970": ["novo jardim"],
        "Q42824": ["mato grosso"],
    }
    return KnowledgeGraph(triplets, aliases)
