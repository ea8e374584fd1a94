"""Seed sampling and constrained depth-first subgraph extraction."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import NoEligibleSeedError, SeedNotInGraphError
from .kgstore import KnowledgeGraph, Triplet, neighbors
from .registry import RelationRegistry


@dataclass
class ExtractionConfig:
    max_edges: int = 15
    max_edges_per_node: int = 5
    depth_range: tuple[int, int] = (2, 5)
    rng_seed: int = 0

    def __post_init__(self):
        if self.max_edges < 1:
            raise ValueError("max_edges must be >= 1")
        if self.max_edges_per_node < 1:
            raise ValueError("max_edges_per_node must be >= 1")
        lo, hi = self.depth_range
        if lo < 1 or hi < lo:
            raise ValueError("depth_range must be an interval with lower bound >= 1")


@dataclass
class Subgraph:
    seed: Triplet
    edges: tuple[Triplet, ...]
    per_node_edge_count: dict[str, int]
    depth_used: int
    domains: frozenset[str] = frozenset()

    def entities(self) -> set[str]:
        out: set[str] = set()
        for t in self.edges:
            out.add(t.subject)
            out.add(t.object)
        return out

    def to_dict(self) -> dict:
        return {
            "seed": self.seed.as_tuple(),
            "edges": [t.as_tuple() for t in self.edges],
            "depth_used": self.depth_used,
            "domains": sorted(self.domains),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Subgraph":
        edges = tuple(Triplet(*t) for t in data["edges"])
        counts: dict[str, int] = {}
        for t in edges:
            counts[t.subject] = counts.get(t.subject, 0) + 1
            counts[t.object] = counts.get(t.object, 0) + 1
        return cls(
            seed=Triplet(*data["seed"]),
            edges=edges,
            per_node_edge_count=counts,
            depth_used=data["depth_used"],
            domains=frozenset(data.get("domains", [])),
        )


@dataclass
class Violation:
    constraint: str
    detail: str
    entity: Optional[str] = None


def sample_seed(
    graph: KnowledgeGraph, registry: RelationRegistry, rng: random.Random
) -> Triplet:
    """Uniform draw over triplets whose relation is whitelisted."""
    eligible = [t for t in graph.triplets if t.relation in registry]
    if not eligible:
        raise NoEligibleSeedError(registry.relation_ids)
    return eligible[rng.randrange(len(eligible))]


def extract(
    graph: KnowledgeGraph,
    seed: Triplet,
    config: ExtractionConfig,
    rng: random.Random,
    registry: Optional[RelationRegistry] = None,
) -> Subgraph:
    """Grow a subgraph by DFS from the seed's subject.

    Expansion stops when the edge cap is reached, per-node caps block it, or
    the depth limit drawn for this run is hit. The seed edge is always kept,
    even when it alone would violate a cap.
    """
    if seed not in graph:
        raise SeedNotInGraphError(f"seed triplet not present in graph: {seed}")
    depth_limit = rng.randint(*config.depth_range)

    edges: list[Triplet] = [seed]
    edge_set: set[Triplet] = {seed}
    counts: dict[str, int] = {seed.subject: 1}
    counts[seed.object] = counts.get(seed.object, 0) + 1

    def visit(node: str, depth: int) -> None:
        if depth >= depth_limit or len(edges) >= config.max_edges:
            return
        incident = neighbors(graph, node, "both")
        rng.shuffle(incident)
        for t in incident:
            if len(edges) >= config.max_edges:
                return
            if t in edge_set:
                continue
            other = t.object if t.subject == node else t.subject
            if counts.get(node, 0) >= config.max_edges_per_node:
                return
            if counts.get(other, 0) >= config.max_edges_per_node:
                continue
            edges.append(t)
            edge_set.add(t)
            counts[node] = counts.get(node, 0) + 1
            counts[other] = counts.get(other, 0) + 1
            visit(other, depth + 1)

    visit(seed.subject, 0)
    # the pre-added seed edge puts its object one hop out
    visit(seed.object, 1)

    domains: set[str] = set()
    if registry is not None:
        for t in edges:
            d = registry.domain_of(t.relation)
            if d:
                domains.add(d)
    return Subgraph(
        seed=seed,
        edges=tuple(edges),
        per_node_edge_count=counts,
        depth_used=depth_limit,
        domains=frozenset(domains),
    )


def validate_constraints(subgraph: Subgraph, config: ExtractionConfig) -> list[Violation]:
    """Empty list iff the edge cap, per-node caps, and connectivity all hold."""
    violations: list[Violation] = []
    if len(subgraph.edges) > config.max_edges:
        violations.append(
            Violation("max_edges", f"{len(subgraph.edges)} edges > cap {config.max_edges}")
        )
    counts: dict[str, int] = {}
    for t in subgraph.edges:
        counts[t.subject] = counts.get(t.subject, 0) + 1
        counts[t.object] = counts.get(t.object, 0) + 1
    for entity, n in sorted(counts.items()):
        if n > config.max_edges_per_node:
            violations.append(
                Violation(
                    "max_edges_per_node",
                    f"{entity} has {n} edges > cap {config.max_edges_per_node}",
                    entity=entity,
                )
            )
    # Connectivity in discovery order: each edge must touch an already-seen entity.
    seen = {subgraph.seed.subject}
    for t in subgraph.edges:
        if t.subject not in seen and t.object not in seen:
            violations.append(
                Violation("connectivity", f"edge {t.as_tuple()} disconnected from seed subject")
            )
        seen.add(t.subject)
        seen.add(t.object)
    return violations
