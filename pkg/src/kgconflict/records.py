"""Benchmark record persistence (line-delimited JSON) and external-dataset
adapters. Unknown fields on read are preserved opaquely so newer files stay
loadable by older code."""

from __future__ import annotations

import gzip
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Sequence

from .conflicts import PerturbationGroup
from .errors import RecordInvariantError
from .verbalizer import GoldPair

SCHEMA_VERSION = 1

_KNOWN_FIELDS = {
    "schema_version",
    "id",
    "conflict_type",
    "seed_triplets",
    "groups",
    "subgraph_triplets",
    "context_a",
    "context_b",
    "gold_pairs",
    "domains",
    "relations",
    "coverage",
    "provenance",
    "loc_eligible",
}


@dataclass
class BenchmarkRecord:
    id: str
    conflict_type: str
    context_a: str
    context_b: str
    seed_triplets: list[list[str]] = field(default_factory=list)
    groups: list[dict] = field(default_factory=list)
    subgraph_triplets: list[list[str]] = field(default_factory=list)
    gold_pairs: list[dict] = field(default_factory=list)
    domains: list[str] = field(default_factory=list)
    relations: list[str] = field(default_factory=list)
    coverage: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    loc_eligible: bool = True
    extras: dict = field(default_factory=dict)

    @property
    def n_conflicts(self) -> int:
        return len(self.groups)

    def total_length(self) -> int:
        return len(self.context_a.split()) + len(self.context_b.split())

    def validate(self) -> None:
        if not self.context_a or not self.context_b:
            raise RecordInvariantError(self.id, "contexts", "context_a/context_b must be non-empty")
        if self.groups and self.gold_pairs and len(self.groups) != len(self.gold_pairs):
            raise RecordInvariantError(
                self.id,
                "gold_pairs",
                f"{len(self.groups)} groups but {len(self.gold_pairs)} gold pairs",
            )
        if self.loc_eligible and self.groups and not self.gold_pairs:
            raise RecordInvariantError(
                self.id, "gold_pairs", "LOC-eligible record with groups needs gold pairs"
            )

    def to_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "id": self.id,
            "conflict_type": self.conflict_type,
            "seed_triplets": self.seed_triplets,
            "groups": self.groups,
            "subgraph_triplets": self.subgraph_triplets,
            "context_a": self.context_a,
            "context_b": self.context_b,
            "gold_pairs": self.gold_pairs,
            "domains": self.domains,
            "relations": self.relations,
            "coverage": self.coverage,
            "provenance": self.provenance,
            "loc_eligible": self.loc_eligible,
        }
        out.update(self.extras)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BenchmarkRecord":
        extras = {k: v for k, v in data.items() if k not in _KNOWN_FIELDS}
        return cls(
            id=data["id"],
            conflict_type=data.get("conflict_type", ""),
            context_a=data["context_a"],
            context_b=data["context_b"],
            seed_triplets=data.get("seed_triplets", []),
            groups=data.get("groups", []),
            subgraph_triplets=data.get("subgraph_triplets", []),
            gold_pairs=data.get("gold_pairs", []),
            domains=data.get("domains", []),
            relations=data.get("relations", []),
            coverage=data.get("coverage", {}),
            provenance=data.get("provenance", {}),
            loc_eligible=data.get("loc_eligible", True),
            extras=extras,
        )

    def perturbation_groups(self) -> list[PerturbationGroup]:
        return [PerturbationGroup.from_dict(g) for g in self.groups]

    def gold(self) -> list[GoldPair]:
        return [GoldPair.from_dict(g) for g in self.gold_pairs]


def _open_text(path: str | Path, mode: str) -> IO[str]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="utf-8")
    return open(path, mode, encoding="utf-8")


def write_records(records: Iterable[BenchmarkRecord], sink: str | Path) -> int:
    """Validate and append-write records, one JSON object per line."""
    count = 0
    with _open_text(sink, "w") as fh:
        for record in records:
            record.validate()
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")
            count += 1
    return count


def read_records(source: str | Path) -> list[BenchmarkRecord]:
    records = []
    with _open_text(source, "r") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(BenchmarkRecord.from_dict(json.loads(line)))
    return records


# --------------------------------------------------------------------------
# Dataset statistics


def dataset_stats(records: Sequence[BenchmarkRecord]) -> dict:
    """Pure counting pass: per conflict type, per domain, length summary."""
    by_type: dict[str, int] = {}
    by_domain: dict[str, int] = {}
    lengths: list[int] = []
    for r in records:
        by_type[r.conflict_type] = by_type.get(r.conflict_type, 0) + 1
        for d in r.domains:
            by_domain[d] = by_domain.get(d, 0) + 1
        lengths.append(r.total_length())
    lengths.sort()
    length_summary = {
        "min": lengths[0] if lengths else 0,
        "max": lengths[-1] if lengths else 0,
        "median": lengths[len(lengths) // 2] if lengths else 0,
        "total": len(lengths),
    }
    return {
        "by_conflict_type": dict(sorted(by_type.items())),
        "by_domain": dict(sorted(by_domain.items())),
        "length": length_summary,
    }


# --------------------------------------------------------------------------
# External dataset adapters

DEFAULT_MAPPINGS = {
    "econ": {"id": "id", "context_a": "evidence_1", "context_b": "evidence_2"},
    "wikicontradict": {"id": "id", "context_a": "context_1", "context_b": "context_2"},
}


@dataclass
class AdaptOutcome:
    records: list[BenchmarkRecord]
    errors: list[str]
    deduplicated: int = 0


def adapt_external(
    rows: Iterable[dict],
    source: str,
    mapping: Optional[dict[str, str]] = None,
    dedup: bool = False,
) -> AdaptOutcome:
    """Map external export rows into benchmark records.

    Rows lacking sentence-level gold are marked LOC-ineligible; rows missing
    a mandatory field are reported per-row, not fatal.
    """
    if mapping is None:
        if source not in DEFAULT_MAPPINGS:
            raise ValueError(f"no default mapping for source {source!r}")
        mapping = DEFAULT_MAPPINGS[source]
    records: list[BenchmarkRecord] = []
    errors: list[str] = []
    seen_pairs: set[tuple[str, str]] = set()
    deduped = 0
    for i, row in enumerate(rows):
        context_a = str(row.get(mapping["context_a"], "") or "")
        context_b = str(row.get(mapping["context_b"], "") or "")
        if not context_a or not context_b:
            errors.append(f"row {i}: missing mandatory context field")
            continue
        if dedup:
            pair = (context_a, context_b)
            if pair in seen_pairs:
                deduped += 1
                continue
            seen_pairs.add(pair)
        rid = str(row.get(mapping.get("id", "id"), "") or f"{source}-{i}")
        gold_field = mapping.get("gold_pairs")
        gold_pairs = row.get(gold_field, []) if gold_field else []
        record = BenchmarkRecord(
            id=rid,
            conflict_type=str(row.get(mapping.get("conflict_type", ""), "") or ""),
            context_a=context_a,
            context_b=context_b,
            gold_pairs=list(gold_pairs),
            loc_eligible=bool(gold_pairs),
            provenance={"source": source, "row_index": i},
        )
        records.append(record)
    return AdaptOutcome(records=records, errors=errors, deduplicated=deduped)


def load_rows(path: str | Path) -> Iterator[dict]:
    """JSON array or JSONL export file."""
    with _open_text(path, "r") as fh:
        head = fh.read(1)
        fh.seek(0)
        if head == "[":
            yield from json.load(fh)
        else:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)
