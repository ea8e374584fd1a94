"""Whitelisted relation registry: labels, domains, verbalization phrases,
and yes/no question templates for each relation the pipeline may seed on."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Optional

DOMAINS = (
    "Human",
    "Geography",
    "Organization",
    "CreativeWork",
    "ClassConcept",
    "CauseEffect",
    "General",
)


@dataclass(frozen=True)
class RelationEntry:
    relation_id: str
    label: str
    domain: str
    phrase: str
    question_template: str
    negated_phrase: Optional[str] = None


class RelationRegistry:
    def __init__(self, entries: Iterable[RelationEntry]):
        self.entries: dict[str, RelationEntry] = {}
        for e in entries:
            if e.domain not in DOMAINS:
                raise ValueError(f"unknown domain {e.domain!r} for {e.relation_id}")
            if not e.phrase:
                raise ValueError(f"empty phrase for {e.relation_id}")
            self.entries[e.relation_id] = e

    def __contains__(self, relation_id: str) -> bool:
        return relation_id in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[RelationEntry]:
        return iter(self.entries.values())

    def get(self, relation_id: str) -> Optional[RelationEntry]:
        return self.entries.get(relation_id)

    def domain_of(self, relation_id: str) -> Optional[str]:
        entry = self.entries.get(relation_id)
        return entry.domain if entry else None

    @property
    def relation_ids(self) -> frozenset[str]:
        return frozenset(self.entries)


def parse_registry_lines(lines: Iterable[str]) -> RelationRegistry:
    """One relation per line: id<TAB>label<TAB>domain<TAB>phrase<TAB>question<TAB>negated-phrase."""
    entries = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 5:
            raise ValueError(f"registry line {lineno}: expected >=5 columns, got {len(parts)}")
        rid, label, domain, phrase, question = parts[:5]
        negated = parts[5] if len(parts) > 5 and parts[5] else None
        entries.append(RelationEntry(rid, label, domain, phrase, question, negated))
    return RelationRegistry(entries)


def load_registry(path: str | Path) -> RelationRegistry:
    with open(path, encoding="utf-8") as fh:
        return parse_registry_lines(fh)


def default_registry() -> RelationRegistry:
    """The 46 whitelisted relations grouped into the 7 semantic domains."""
    text = resources.files("kgconflict.assets").joinpath("relations.tsv").read_text("utf-8")
    return parse_registry_lines(text.splitlines())
