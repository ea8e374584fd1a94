"""Conflict specification against a subgraph: taxonomy typing, rule-based
fallback perturbations, few-shot generation prompts, and N-conflict assembly.

The model path (prompt building + output parsing) is the fidelity path; the
rule-based fallbacks exist so the full pipeline and all tests run offline.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .errors import ConflictInfeasibleError, GroupIndependenceError, TripletParseError
from .extractor import Subgraph
from .kgstore import KnowledgeGraph, Triplet
from .registry import RelationRegistry

SINGLE_HOP = "SingleHop"
MULTI_HOP = "MultiHop"

MAX_CONFLICTS_PER_INSTANCE = 4


@dataclass(frozen=True)
class ConflictType:
    hop_class: str  # SingleHop | MultiHop
    n_conflicts: int  # 1..4

    def __post_init__(self):
        if self.hop_class not in (SINGLE_HOP, MULTI_HOP):
            raise ValueError(f"unknown hop class: {self.hop_class}")
        if not 1 <= self.n_conflicts <= MAX_CONFLICTS_PER_INSTANCE:
            raise ValueError(f"n_conflicts out of range: {self.n_conflicts}")

    @property
    def key(self) -> str:
        return f"{self.hop_class}-{self.n_conflicts}"


@dataclass(frozen=True)
class SurfaceTriplet:
    """A triplet in surface form: labels plus optional resolved ids.

    Replacement triplets and parsed model output live here; a component
    without an id is a free-text node the verbalizer renders verbatim.
    """

    subject: str
    relation: str
    object: str
    subject_id: Optional[str] = None
    relation_id: Optional[str] = None
    object_id: Optional[str] = None
    negated: bool = False

    @property
    def resolved(self) -> bool:
        return all((self.subject_id, self.relation_id, self.object_id))

    def as_tuple(self) -> tuple[str, str, str]:
        return (self.subject, self.relation, self.object)

    def key(self) -> str:
        return "|".join(self.as_tuple())

    def to_dict(self) -> dict:
        out: dict = {"subject": self.subject, "relation": self.relation, "object": self.object}
        for k in ("subject_id", "relation_id", "object_id"):
            v = getattr(self, k)
            if v is not None:
                out[k] = v
        if self.negated:
            out["negated"] = True
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "SurfaceTriplet":
        return cls(
            subject=data["subject"],
            relation=data["relation"],
            object=data["object"],
            subject_id=data.get("subject_id"),
            relation_id=data.get("relation_id"),
            object_id=data.get("object_id"),
            negated=bool(data.get("negated", False)),
        )


def surface_form(
    triplet: Triplet, graph: KnowledgeGraph, registry: Optional[RelationRegistry] = None
) -> SurfaceTriplet:
    """Render a graph triplet with labels; registry phrase wins over the raw
    relation label when available."""
    entry = registry.get(triplet.relation) if registry else None
    relation = entry.phrase if entry else graph.relation_label(triplet.relation)
    return SurfaceTriplet(
        subject=graph.entity_label(triplet.subject),
        relation=relation,
        object=graph.entity_label(triplet.object),
        subject_id=triplet.subject,
        relation_id=triplet.relation,
        object_id=triplet.object,
    )


@dataclass
class PerturbationGroup:
    original_triplets: tuple[Triplet, ...]
    replacement_triplets: tuple[SurfaceTriplet, ...]
    hop_class: str

    def __post_init__(self):
        if not self.original_triplets or not self.replacement_triplets:
            raise ValueError("original and replacement triplet lists must be non-empty")
        if self.hop_class == SINGLE_HOP:
            if len(self.original_triplets) != 1 or len(self.replacement_triplets) != 1:
                raise ValueError("single-hop group must be a 1-to-1 replacement")
        elif self.hop_class == MULTI_HOP:
            if not 2 <= len(self.replacement_triplets) <= 3:
                raise ValueError("multi-hop group needs a 2-3 triplet replacement chain")
        else:
            raise ValueError(f"unknown hop class: {self.hop_class}")
        orig_keys = {t.as_tuple() for t in self.original_triplets}
        repl_keys = {t.as_tuple() for t in self.replacement_triplets}
        if orig_keys == repl_keys:
            raise ValueError("replacement set equals the original set")

    def to_dict(self) -> dict:
        return {
            "original_triplets": [t.as_tuple() for t in self.original_triplets],
            "replacement_triplets": [t.to_dict() for t in self.replacement_triplets],
            "hop_class": self.hop_class,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PerturbationGroup":
        return cls(
            original_triplets=tuple(Triplet(*t) for t in data["original_triplets"]),
            replacement_triplets=tuple(
                SurfaceTriplet.from_dict(d) for d in data["replacement_triplets"]
            ),
            hop_class=data["hop_class"],
        )


@dataclass
class Provenance:
    generator: str  # rule | model
    model_id: Optional[str] = None
    prompt_hash: Optional[str] = None
    few_shot_ids: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "model_id": self.model_id,
            "prompt_hash": self.prompt_hash,
            "few_shot_ids": list(self.few_shot_ids),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Provenance":
        return cls(
            generator=data.get("generator", "rule"),
            model_id=data.get("model_id"),
            prompt_hash=data.get("prompt_hash"),
            few_shot_ids=tuple(data.get("few_shot_ids", ())),
        )


@dataclass
class ConflictSpec:
    subgraph: Subgraph
    groups: tuple[PerturbationGroup, ...]
    conflict_type: ConflictType
    provenance: Provenance

    def to_dict(self) -> dict:
        return {
            "subgraph": self.subgraph.to_dict(),
            "groups": [g.to_dict() for g in self.groups],
            "conflict_type": {
                "hop_class": self.conflict_type.hop_class,
                "n_conflicts": self.conflict_type.n_conflicts,
            },
            "provenance": self.provenance.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConflictSpec":
        ct = data["conflict_type"]
        return cls(
            subgraph=Subgraph.from_dict(data["subgraph"]),
            groups=tuple(PerturbationGroup.from_dict(g) for g in data["groups"]),
            conflict_type=ConflictType(ct["hop_class"], ct["n_conflicts"]),
            provenance=Provenance.from_dict(data.get("provenance", {})),
        )


# --------------------------------------------------------------------------
# Few-shot bank


@dataclass
class Demonstration:
    demo_id: str
    relation_id: str
    original: SurfaceTriplet
    replacements: tuple[SurfaceTriplet, ...]
    status: str = "pending"  # pending | accepted | rejected

    def to_dict(self) -> dict:
        return {
            "demo_id": self.demo_id,
            "relation_id": self.relation_id,
            "original": self.original.to_dict(),
            "replacements": [r.to_dict() for r in self.replacements],
            "status": self.status,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Demonstration":
        return cls(
            demo_id=data["demo_id"],
            relation_id=data["relation_id"],
            original=SurfaceTriplet.from_dict(data["original"]),
            replacements=tuple(SurfaceTriplet.from_dict(r) for r in data["replacements"]),
            status=data.get("status", "pending"),
        )


class FewShotBank:
    """Per-relation demonstration store; only accepted entries reach prompts."""

    PER_PROMPT = 3

    def __init__(self, demonstrations: Iterable[Demonstration] = ()):
        self.by_relation: dict[str, list[Demonstration]] = {}
        for d in demonstrations:
            self.add(d)

    def add(self, demo: Demonstration) -> None:
        self.by_relation.setdefault(demo.relation_id, []).append(demo)

    def accepted(self, relation_id: str) -> list[Demonstration]:
        return [d for d in self.by_relation.get(relation_id, []) if d.status == "accepted"]

    def prompt_demos(self, relation_id: str) -> list[Demonstration]:
        return self.accepted(relation_id)[: self.PER_PROMPT]

    def save(self, path: str | Path) -> int:
        demos = [d for ds in self.by_relation.values() for d in ds]
        with open(path, "w", encoding="utf-8") as fh:
            for d in demos:
                fh.write(json.dumps(d.to_dict()) + "\n")
        return len(demos)

    @classmethod
    def load(cls, path: str | Path) -> "FewShotBank":
        bank = cls()
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    bank.add(Demonstration.from_dict(json.loads(line)))
        return bank


# --------------------------------------------------------------------------
# Prompt building and model-output parsing

_PROMPT_FILES = {
    "multi_hop": "conflict_generation_multi_hop.txt",
    "single_hop": "conflict_generation_single_hop.txt",
    "triplet_only": "conflict_generation_triplet_only.txt",
}


def _load_prompt(name: str) -> str:
    return resources.files("kgconflict.assets.prompts").joinpath(name).read_text("utf-8")


def format_tuple(t: SurfaceTriplet | Triplet) -> str:
    s, r, o = t.as_tuple()
    return f"({s} | {r} | {o})"


@dataclass
class PromptBuild:
    text: str
    zero_shot: bool
    few_shot_ids: tuple[str, ...]

    @property
    def prompt_hash(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()[:16]


def build_generation_prompt(
    seed: Triplet | SurfaceTriplet,
    subgraph: Optional[Subgraph],
    bank: FewShotBank,
    mode: str = "multi_hop",
    graph: Optional[KnowledgeGraph] = None,
) -> PromptBuild:
    """Byte-stable generation prompt with up to 3 accepted demonstrations.

    With zero accepted demonstrations the prompt is emitted zero-shot and
    flagged, so callers can route it back through demonstration curation.
    """
    if mode not in _PROMPT_FILES:
        raise ValueError(f"unknown generation mode: {mode}")
    if mode != "triplet_only" and (subgraph is None or not subgraph.edges):
        raise ValueError("non-triplet_only modes require a non-empty subgraph")

    if isinstance(seed, Triplet):
        relation_id = seed.relation
        seed_surface = surface_form(seed, graph) if graph else SurfaceTriplet(*seed.as_tuple())
    else:
        relation_id = seed.relation_id or seed.relation
        seed_surface = seed

    demos = bank.prompt_demos(relation_id)
    if demos:
        blocks = []
        for d in demos:
            blocks.append(
                "[Original Triplet]\n"
                + format_tuple(d.original)
                + "\n[Modified Triplet]\n"
                + " ".join(format_tuple(r) for r in d.replacements)
            )
        demo_text = "Demonstrations\n" + "\n\n".join(blocks) + "\n"
    else:
        demo_text = ""

    subgraph_text = ""
    if mode != "triplet_only" and subgraph is not None:
        shown = [t for t in subgraph.edges if t != subgraph.seed] or list(subgraph.edges)
        if graph is not None:
            rendered = [format_tuple(surface_form(t, graph)) for t in shown]
        else:
            rendered = [format_tuple(t) for t in shown]
        subgraph_text = ", ".join(rendered)

    text = _load_prompt(_PROMPT_FILES[mode]).format(
        original_triplet=format_tuple(seed_surface),
        subgraph=subgraph_text,
        demonstrations=demo_text,
    )
    return PromptBuild(
        text=text,
        zero_shot=not demos,
        few_shot_ids=tuple(d.demo_id for d in demos),
    )


def _scan_tuples(text: str) -> list[list[str]]:
    """Find balanced-paren groups and split them on top-level pipes.

    Entity labels may themselves contain parentheses, e.g.
    "(tocantins (state) | borders | mato grosso)".
    """
    results: list[list[str]] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] != "(":
            i += 1
            continue
        depth = 0
        parts: list[str] = []
        current: list[str] = []
        j = i
        while j < n:
            c = text[j]
            if c == "(":
                depth += 1
                if depth > 1:
                    current.append(c)
            elif c == ")":
                depth -= 1
                if depth == 0:
                    parts.append("".join(current).strip())
                    break
                current.append(c)
            elif c == "|" and depth == 1:
                parts.append("".join(current).strip())
                current = []
            else:
                current.append(c)
            j += 1
        if j < n and depth == 0:
            results.append(parts)
            i = j + 1
        else:
            break  # unbalanced tail
    return results


class AliasIndex:
    """Case-insensitive surface-form -> id lookup for entities and relations."""

    def __init__(self, graph: Optional[KnowledgeGraph] = None, registry: Optional[RelationRegistry] = None):
        self.entity: dict[str, str] = {}
        self.relation: dict[str, str] = {}
        if graph is not None:
            for eid, aliases in graph.entity_aliases.items():
                for a in aliases:
                    self.entity.setdefault(a.casefold(), eid)
            for rid, aliases in graph.relation_aliases.items():
                for a in aliases:
                    self.relation.setdefault(a.casefold(), rid)
        if registry is not None:
            for entry in registry:
                self.relation.setdefault(entry.label.casefold(), entry.relation_id)
                self.relation.setdefault(entry.phrase.casefold(), entry.relation_id)


def parse_triplet_output(text: str, aliases: Optional[AliasIndex] = None) -> list[SurfaceTriplet]:
    """Extract every parenthesized 3-part pipe-separated tuple from model text."""
    tuples = [p for p in _scan_tuples(text) if len(p) == 3 and all(p)]
    if not tuples:
        raise TripletParseError(text)
    out: list[SurfaceTriplet] = []
    for s, r, o in tuples:
        sid = rid = oid = None
        if aliases is not None:
            sid = aliases.entity.get(s.casefold())
            oid = aliases.entity.get(o.casefold())
            rid = aliases.relation.get(r.casefold())
        out.append(SurfaceTriplet(s, r, o, subject_id=sid, relation_id=rid, object_id=oid))
    return out


# --------------------------------------------------------------------------
# Rule-based fallback generators


def single_hop_substitution_pool(graph: KnowledgeGraph, seed: Triplet) -> list[str]:
    """All legal substitute objects: other objects of the same relation that
    do not already hold for the seed subject."""
    existing = {t.object for t in graph.out_index[seed.subject] if t.relation == seed.relation}
    pool = {t.object for t in graph.triplets if t.relation == seed.relation}
    pool -= existing
    pool.discard(seed.subject)
    return sorted(pool)


def generate_single_hop_fallback(
    graph: KnowledgeGraph,
    seed: Triplet,
    registry: RelationRegistry,
    rng: random.Random,
    strategy: str = "auto",
) -> PerturbationGroup:
    """Deterministic single-hop perturbation: object substitution or relation
    negation via the registry's negated phrase."""
    entry = registry.get(seed.relation)
    if entry is None:
        raise ConflictInfeasibleError(f"seed relation {seed.relation} not in registry")
    if strategy not in ("auto", "substitute", "negate"):
        raise ValueError(f"unknown strategy: {strategy}")

    pool = single_hop_substitution_pool(graph, seed)
    can_substitute = bool(pool)
    can_negate = entry.negated_phrase is not None

    if strategy == "auto":
        feasible = [s for s, ok in (("substitute", can_substitute), ("negate", can_negate)) if ok]
        if not feasible:
            raise ConflictInfeasibleError(
                f"no substitute object and no negated phrase for relation {seed.relation}"
            )
        strategy = feasible[rng.randrange(len(feasible))]

    if strategy == "substitute":
        if not can_substitute:
            raise ConflictInfeasibleError(
                f"no substitute object available for relation {seed.relation}"
            )
        new_object = pool[rng.randrange(len(pool))]
        replacement = SurfaceTriplet(
            subject=graph.entity_label(seed.subject),
            relation=entry.phrase,
            object=graph.entity_label(new_object),
            subject_id=seed.subject,
            relation_id=seed.relation,
            object_id=new_object,
        )
    else:
        if not can_negate:
            raise ConflictInfeasibleError(f"no negated phrase defined for relation {seed.relation}")
        replacement = SurfaceTriplet(
            subject=graph.entity_label(seed.subject),
            relation=entry.negated_phrase,
            object=graph.entity_label(seed.object),
            subject_id=seed.subject,
            relation_id=seed.relation,
            object_id=seed.object,
            negated=True,
        )
    return PerturbationGroup(
        original_triplets=(seed,),
        replacement_triplets=(replacement,),
        hop_class=SINGLE_HOP,
    )


# Multi-hop pattern families keyed by seed relation id.
CONTAINMENT_RELATIONS = frozenset({"P150", "P527", "P361", "P4330"})
EQUIVALENCE_RELATIONS = frozenset({"P460"})
PERSON_LOCATION_RELATIONS = frozenset({"P937", "P551"})
ADJACENCY_RELATIONS = frozenset({"P47"})

REROUTE_ADJACENT_PHRASE = "borders"
REROUTE_CONTAINS_PHRASE = "contains"
EQUIVALENT_PHRASE = "equivalent to"
DIFFERENT_PHRASE = "different from"
DISTINCT_PLACE_PHRASE = "is geographically distinct from"
PART_OF_PHRASE = "is part of"


def _label(graph: KnowledgeGraph, entity_id: str) -> str:
    return graph.entity_label(entity_id)


def _reroute_chain(
    graph: KnowledgeGraph, seed: Triplet, rng: random.Random
) -> Optional[tuple[SurfaceTriplet, ...]]:
    """(A contains B) -> (A borders C), (C contains B) for some neighbor C."""
    candidates = sorted(
        {
            (t.object if t.subject == seed.subject else t.subject)
            for t in graph.out_index[seed.subject] + graph.in_index[seed.subject]
            if t.relation in ADJACENCY_RELATIONS
        }
        - {seed.object, seed.subject}
    )
    if not candidates:
        return None
    mid = candidates[rng.randrange(len(candidates))]
    a, b, c = _label(graph, seed.subject), _label(graph, seed.object), _label(graph, mid)
    return (
        SurfaceTriplet(a, REROUTE_ADJACENT_PHRASE, c, seed.subject, None, mid),
        SurfaceTriplet(c, REROUTE_CONTAINS_PHRASE, b, mid, None, seed.object),
    )


def _equivalence_break_chain(
    graph: KnowledgeGraph, seed: Triplet, subgraph: Subgraph, rng: random.Random
) -> Optional[tuple[SurfaceTriplet, ...]]:
    """(A equivalent B) -> (A equivalent C)[, (C equivalent D)], (last different from B)."""
    pool = sorted(
        {
            t.object
            for t in subgraph.edges + graph.out_index[seed.subject]
            if t.subject == seed.subject
            and t.relation == seed.relation
            and t.object not in (seed.object, seed.subject)
        }
    )
    if not pool:
        return None
    mid = pool[rng.randrange(len(pool))]
    chain = [
        SurfaceTriplet(
            _label(graph, seed.subject), EQUIVALENT_PHRASE, _label(graph, mid),
            seed.subject, seed.relation, mid,
        )
    ]
    last = mid
    extensions = sorted(
        {
            t.object
            for t in graph.out_index.get(mid, ())
            if t.relation == seed.relation and t.object not in (seed.subject, seed.object, mid)
        }
    )
    if extensions:
        nxt = extensions[rng.randrange(len(extensions))]
        chain.append(
            SurfaceTriplet(
                _label(graph, mid), EQUIVALENT_PHRASE, _label(graph, nxt),
                mid, seed.relation, nxt,
            )
        )
        last = nxt
    chain.append(
        SurfaceTriplet(
            _label(graph, last), DIFFERENT_PHRASE, _label(graph, seed.object),
            last, None, seed.object, negated=True,
        )
    )
    return tuple(chain)


def _relocation_chain(
    graph: KnowledgeGraph, seed: Triplet, subgraph: Subgraph, rng: random.Random
) -> Optional[tuple[SurfaceTriplet, ...]]:
    """(A located-at B) -> (A r2 D)[, (D part of E)], (last geographically distinct from B)."""
    alternates = sorted(
        {
            (t.relation, t.object)
            for t in subgraph.edges
            if t.subject == seed.subject
            and t.relation != seed.relation
            and t.object != seed.object
        }
    )
    if not alternates:
        return None
    r2, d = alternates[rng.randrange(len(alternates))]
    chain = [
        SurfaceTriplet(
            _label(graph, seed.subject), graph.relation_label(r2), _label(graph, d),
            seed.subject, r2, d,
        )
    ]
    last = d
    parents = sorted(
        {
            t.object
            for t in graph.out_index.get(d, ())
            if t.relation == "P361" and t.object not in (seed.subject, seed.object)
        }
    )
    if parents:
        parent = parents[rng.randrange(len(parents))]
        chain.append(
            SurfaceTriplet(
                _label(graph, d), PART_OF_PHRASE, _label(graph, parent),
                d, "P361", parent,
            )
        )
        last = parent
    chain.append(
        SurfaceTriplet(
            _label(graph, last), DISTINCT_PLACE_PHRASE, _label(graph, seed.object),
            last, None, seed.object, negated=True,
        )
    )
    return tuple(chain)


def generate_multi_hop_fallback(
    graph: KnowledgeGraph,
    seed: Triplet,
    subgraph: Subgraph,
    registry: RelationRegistry,
    rng: random.Random,
) -> PerturbationGroup:
    """Build a 2-3 triplet chain whose conclusion contradicts the seed.

    Pattern families: containment re-routing, equivalence-breaking chains,
    and attribute relocation. Raises when no family applies to the relation.
    """
    if not subgraph.edges:
        raise ValueError("subgraph must be non-empty")
    chain: Optional[tuple[SurfaceTriplet, ...]] = None
    if seed.relation in CONTAINMENT_RELATIONS:
        chain = _reroute_chain(graph, seed, rng)
    elif seed.relation in EQUIVALENCE_RELATIONS:
        chain = _equivalence_break_chain(graph, seed, subgraph, rng)
    elif seed.relation in PERSON_LOCATION_RELATIONS:
        chain = _relocation_chain(graph, seed, subgraph, rng)
    else:
        raise ConflictInfeasibleError(
            f"no multi-hop pattern applies to relation {seed.relation}"
        )
    if chain is None:
        raise ConflictInfeasibleError(
            f"no intermediate entity available to build a chain for relation {seed.relation}"
        )
    subgraph_entities = subgraph.entities()
    chain_entities = {x for t in chain for x in (t.subject_id, t.object_id) if x}
    if not chain_entities & subgraph_entities:
        raise ConflictInfeasibleError("chain shares no entity with the subgraph")
    return PerturbationGroup(
        original_triplets=(seed,),
        replacement_triplets=chain,
        hop_class=MULTI_HOP,
    )


# --------------------------------------------------------------------------
# Assembly and taxonomy classification


def classify_conflict_pattern(groups: list[PerturbationGroup] | tuple[PerturbationGroup, ...]) -> ConflictType:
    """n = group count; MultiHop iff any group replaces with a chain of >= 2."""
    if not groups:
        raise ValueError("groups must be non-empty")
    for g in groups:
        if not g.replacement_triplets:
            raise ValueError("group with empty replacement list")
    hop = MULTI_HOP if any(len(g.replacement_triplets) >= 2 for g in groups) else SINGLE_HOP
    return ConflictType(hop, len(groups))


def _independence_problems(groups: list[PerturbationGroup]) -> list[str]:
    problems = []
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            a, b = groups[i], groups[j]
            shared = {t.as_tuple() for t in a.original_triplets} & {
                t.as_tuple() for t in b.original_triplets
            }
            if shared:
                problems.append(f"groups {i} and {j} share original triplet(s) {sorted(shared)}")
            # A perturbed slot is the (subject, relation-surface) pair of a
            # replacement; two groups rewriting the same slot interact.
            slots_a = {(t.subject, t.relation) for t in a.replacement_triplets}
            slots_b = {(t.subject, t.relation) for t in b.replacement_triplets}
            overlap = slots_a & slots_b
            if overlap:
                problems.append(f"groups {i} and {j} perturb the same slot(s) {sorted(overlap)}")
    return problems


def assemble_instance(
    subgraph: Subgraph,
    groups: list[PerturbationGroup] | tuple[PerturbationGroup, ...],
    provenance: Optional[Provenance] = None,
) -> ConflictSpec:
    groups = tuple(groups)
    if not 1 <= len(groups) <= MAX_CONFLICTS_PER_INSTANCE:
        raise ValueError(f"group count must be in [1, {MAX_CONFLICTS_PER_INSTANCE}]")
    problems = _independence_problems(list(groups))
    if problems:
        raise GroupIndependenceError("; ".join(problems))
    return ConflictSpec(
        subgraph=subgraph,
        groups=groups,
        conflict_type=classify_conflict_pattern(groups),
        provenance=provenance or Provenance(generator="rule"),
    )
