"""Triplet knowledge-graph store: loading, filtering, and adjacency indexing.

The graph is built once and treated as immutable afterwards; every later
stage only reads it, so it can be shared freely across workers.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .errors import EntityNotFoundError

# Canonical predicate for symbol-like labels: no alphanumeric character at all.
SYMBOL_LABEL_PATTERN = r"^[^0-9A-Za-z]*$"

CACHE_FORMAT_VERSION = 1


@dataclass(frozen=True, order=True)
class Triplet:
    subject: str
    relation: str
    object: str

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.subject, self.relation, self.object)


@dataclass
class LoadReport:
    malformed_lines: int = 0
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0
    dangling: list[Triplet] = field(default_factory=list)

    @property
    def dangling_count(self) -> int:
        return len(self.dangling)


class KnowledgeGraph:
    """Immutable indexed edge set with per-entity adjacency and degree."""

    def __init__(
        self,
        triplets: Iterable[Triplet],
        entity_aliases: Optional[dict[str, list[str]]] = None,
        relation_aliases: Optional[dict[str, list[str]]] = None,
    ):
        self.triplets: tuple[Triplet, ...] = tuple(triplets)
        self.entity_aliases = dict(entity_aliases or {})
        self.relation_aliases = dict(relation_aliases or {})
        out_index: dict[str, list[Triplet]] = {}
        in_index: dict[str, list[Triplet]] = {}
        for t in self.triplets:
            out_index.setdefault(t.subject, []).append(t)
            in_index.setdefault(t.object, []).append(t)
            out_index.setdefault(t.object, [])
            in_index.setdefault(t.subject, [])
        # Alias-file entities with no incident edges are isolated nodes.
        for e in self.entity_aliases:
            out_index.setdefault(e, [])
            in_index.setdefault(e, [])
        self.out_index = {e: tuple(ts) for e, ts in out_index.items()}
        self.in_index = {e: tuple(ts) for e, ts in in_index.items()}
        self.degree = {
            e: len(self.out_index[e]) + len(self.in_index[e]) for e in self.out_index
        }
        self._edge_set = frozenset(self.triplets)

    @property
    def entity_count(self) -> int:
        return len(self.out_index)

    @property
    def triplet_count(self) -> int:
        return len(self.triplets)

    @property
    def entities(self) -> Iterator[str]:
        return iter(self.out_index)

    def __contains__(self, triplet: Triplet) -> bool:
        return triplet in self._edge_set

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self.out_index

    def entity_label(self, entity_id: str) -> str:
        aliases = self.entity_aliases.get(entity_id)
        return aliases[0] if aliases else entity_id

    def relation_label(self, relation_id: str) -> str:
        aliases = self.relation_aliases.get(relation_id)
        return aliases[0] if aliases else relation_id


@dataclass
class FilterConfig:
    entity_denylist: frozenset[str] = frozenset()
    top_degree_cutoff: int = 30
    relation_whitelist: Optional[frozenset[str]] = None
    denylist_pattern: Optional[str] = None

    def __post_init__(self):
        if self.top_degree_cutoff < 0:
            raise ValueError("top_degree_cutoff must be >= 0")
        if self.relation_whitelist is not None and not self.relation_whitelist:
            raise ValueError("relation_whitelist must be non-empty when set")


def _parse_alias_lines(lines: Iterable[str]) -> dict[str, list[str]]:
    aliases: dict[str, list[str]] = {}
    for line in lines:
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        ident, rest = parts[0], parts[1:]
        if not ident:
            continue
        seen = aliases.setdefault(ident, [])
        for alias in rest:
            if alias and alias not in seen:
                seen.append(alias)
    return aliases


def load_graph(
    triplet_source: Iterable[str],
    entity_alias_source: Iterable[str] = (),
    relation_alias_source: Iterable[str] = (),
) -> tuple[KnowledgeGraph, LoadReport]:
    """Build an indexed graph from tab-separated line streams.

    Malformed lines, self-loops, and duplicates are counted in the report
    instead of silently dropped. Triplets referencing an entity or relation
    missing from non-empty alias files are excluded and listed as dangling.
    """
    entity_aliases = _parse_alias_lines(entity_alias_source)
    relation_aliases = _parse_alias_lines(relation_alias_source)
    check_entities = bool(entity_aliases)
    check_relations = bool(relation_aliases)

    report = LoadReport()
    triplets: list[Triplet] = []
    seen: set[Triplet] = set()
    for line in triplet_source:
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not all(parts):
            report.malformed_lines += 1
            continue
        t = Triplet(*parts)
        if t.subject == t.object:
            report.self_loops_dropped += 1
            continue
        if t in seen:
            report.duplicates_dropped += 1
            continue
        if (
            check_entities
            and (t.subject not in entity_aliases or t.object not in entity_aliases)
        ) or (check_relations and t.relation not in relation_aliases):
            report.dangling.append(t)
            continue
        seen.add(t)
        triplets.append(t)
    graph = KnowledgeGraph(triplets, entity_aliases, relation_aliases)
    return graph, report


def apply_filters(graph: KnowledgeGraph, config: FilterConfig) -> KnowledgeGraph:
    """Drop denylisted / symbol-labeled / top-degree entities and keep only
    whitelisted relations, then re-index."""
    removed: set[str] = set(config.entity_denylist)
    if config.denylist_pattern:
        pat = re.compile(config.denylist_pattern)
        for e in graph.out_index:
            if pat.match(graph.entity_label(e)):
                removed.add(e)
    if config.top_degree_cutoff > 0:
        ranked = sorted(graph.degree.items(), key=lambda kv: (-kv[1], kv[0]))
        removed.update(e for e, _ in ranked[: config.top_degree_cutoff])

    kept = [
        t
        for t in graph.triplets
        if t.subject not in removed
        and t.object not in removed
        and (config.relation_whitelist is None or t.relation in config.relation_whitelist)
    ]
    entity_aliases = {e: a for e, a in graph.entity_aliases.items() if e not in removed}
    return KnowledgeGraph(kept, entity_aliases, graph.relation_aliases)


def neighbors(graph: KnowledgeGraph, entity: str, direction: str = "both") -> list[Triplet]:
    """Incident triplets in deterministic order (relation id, counterpart id)."""
    if not graph.has_entity(entity):
        raise EntityNotFoundError(entity)
    if direction not in ("out", "in", "both"):
        raise ValueError(f"unknown direction: {direction}")
    edges: list[Triplet] = []
    if direction in ("out", "both"):
        edges.extend(graph.out_index[entity])
    if direction in ("in", "both"):
        edges.extend(graph.in_index[entity])

    def counterpart(t: Triplet) -> str:
        return t.object if t.subject == entity else t.subject

    edges.sort(key=lambda t: (t.relation, counterpart(t), t.as_tuple()))
    return edges


def serialize_graph(graph: KnowledgeGraph) -> str:
    """Self-describing JSON form; round-trips through deserialize_graph."""
    return json.dumps(
        {
            "format": "kgconflict-graph",
            "version": CACHE_FORMAT_VERSION,
            "triplets": [t.as_tuple() for t in graph.triplets],
            "entity_aliases": graph.entity_aliases,
            "relation_aliases": graph.relation_aliases,
        }
    )


def deserialize_graph(text: str) -> KnowledgeGraph:
    data = json.loads(text)
    if data.get("format") != "kgconflict-graph":
        raise ValueError("not a serialized graph file")
    return KnowledgeGraph(
        (Triplet(*t) for t in data["triplets"]),
        data.get("entity_aliases", {}),
        data.get("relation_aliases", {}),
    )


def content_hash(*sources: Iterable[str]) -> str:
    h = hashlib.sha256()
    for source in sources:
        for line in source:
            h.update(line.encode("utf-8"))
        h.update(b"\x00")
    return h.hexdigest()


def write_graph_cache(graph: KnowledgeGraph, cache_dir: str | Path, key: str) -> Path:
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    path = cache_dir / f"graph-{key}.json"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(serialize_graph(graph), encoding="utf-8")
    tmp.replace(path)
    return path


def read_graph_cache(cache_dir: str | Path, key: str) -> Optional[KnowledgeGraph]:
    path = Path(cache_dir) / f"graph-{key}.json"
    if not path.exists():
        return None
    return deserialize_graph(path.read_text(encoding="utf-8"))
