"""Triplet-set verbalization, faithfulness checks, and gold sentence labels.

Two interchangeable paths produce contexts: the model path (conversion +
verification prompts) and a deterministic template path used offline. One
sentence splitter is shared with the evaluation side so gold labels and
predictions stay commensurable.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Sequence

from .conflicts import ConflictSpec, SurfaceTriplet, format_tuple
from .errors import UnlocatableGroupError
from .registry import RelationRegistry

_ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "st", "no", "vs", "etc", "inc", "ltd",
    "jr", "sr", "co", "corp", "approx", "dept", "fig", "vol",
}

_TOKEN_RE = re.compile(r"[0-9a-z]+")


@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int
    text: str


@dataclass
class VerbalizedContext:
    text: str
    sentences: list[SentenceSpan]
    triplet_sentence_map: dict[str, tuple[int, ...]]
    source: str  # model | template

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "sentences": [[s.start, s.end, s.text] for s in self.sentences],
            "triplet_sentence_map": {k: list(v) for k, v in self.triplet_sentence_map.items()},
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VerbalizedContext":
        return cls(
            text=data["text"],
            sentences=[SentenceSpan(s[0], s[1], s[2]) for s in data["sentences"]],
            triplet_sentence_map={
                k: tuple(v) for k, v in data.get("triplet_sentence_map", {}).items()
            },
            source=data.get("source", "model"),
        )


@dataclass
class CoverageReport:
    conflict_covered: bool
    subgraph_coverage_ratio: float
    missing_triplets: list[str]
    verifier_verdict: str = "skipped"  # no_error | yes_error | skipped

    def to_dict(self) -> dict:
        return {
            "conflict_covered": self.conflict_covered,
            "subgraph_coverage_ratio": self.subgraph_coverage_ratio,
            "missing_triplets": self.missing_triplets,
            "verifier_verdict": self.verifier_verdict,
        }


@dataclass
class GoldPair:
    a_indices: tuple[int, ...]
    b_indices: tuple[int, ...]
    a_texts: tuple[str, ...]
    b_texts: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "a_indices": list(self.a_indices),
            "b_indices": list(self.b_indices),
            "a_texts": list(self.a_texts),
            "b_texts": list(self.b_texts),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GoldPair":
        return cls(
            a_indices=tuple(data["a_indices"]),
            b_indices=tuple(data["b_indices"]),
            a_texts=tuple(data["a_texts"]),
            b_texts=tuple(data["b_texts"]),
        )


# --------------------------------------------------------------------------
# Sentence splitting (lossless: spans tile the text byte-for-byte)


def split_sentences(text: str) -> list[SentenceSpan]:
    """Rule-based splitter: terminator punctuation with an abbreviation and
    initialism guard. Concatenating the spans reproduces the input exactly."""
    if not text:
        return []
    boundaries: list[int] = []
    n = len(text)
    i = 0
    while i < n:
        c = text[i]
        if c in ".!?":
            # Skip runs of terminators and closing quotes/brackets.
            j = i + 1
            while j < n and text[j] in '.!?"\')]':
                j += 1
            if c == ".":
                word = _trailing_word(text, i)
                if word.lower() in _ABBREVIATIONS or (len(word) == 1 and word.isalpha()):
                    i += 1
                    continue
            if j >= n:
                boundaries.append(n)
                i = j
                continue
            if text[j] == " ":
                k = j
                while k < n and text[k] == " ":
                    k += 1
                if k < n and (text[k].isupper() or text[k].isdigit() or text[k] in '"('):
                    boundaries.append(k)
                    i = k
                    continue
            i = j
            continue
        i += 1
    if not boundaries or boundaries[-1] != n:
        boundaries.append(n)
    spans = []
    start = 0
    for b in boundaries:
        if b > start:
            spans.append(SentenceSpan(start, b, text[start:b]))
            start = b
    return spans


def _trailing_word(text: str, pos: int) -> str:
    j = pos - 1
    while j >= 0 and (text[j].isalnum() or text[j] == "-"):
        j -= 1
    return text[j + 1 : pos]


def normalize(text: str) -> str:
    return " ".join(_TOKEN_RE.findall(text.casefold()))


def tokens(text: str) -> set[str]:
    return set(_TOKEN_RE.findall(text.casefold()))


# --------------------------------------------------------------------------
# Prompts for the model path


def _prompt(name: str) -> str:
    return resources.files("kgconflict.assets.prompts").joinpath(name).read_text("utf-8")


def build_conversion_prompt(triplets: Sequence[SurfaceTriplet]) -> str:
    if not triplets:
        raise ValueError("triplets must be non-empty")
    listing = "\n".join(format_tuple(t) for t in triplets)
    return _prompt("kg_to_text.txt").format(triplets=listing)


def build_verification_prompt(triplets: Sequence[SurfaceTriplet], context: str) -> str:
    if not context:
        raise ValueError("context must be non-empty")
    if not triplets:
        raise ValueError("verification of an empty triplet list is vacuous; rejected")
    listing = "\n".join(format_tuple(t) for t in triplets)
    return _prompt("kg_to_text_verification.txt").format(triplets=listing, context=context)


def parse_verification_verdict(text: str) -> str:
    lowered = text.strip().casefold()
    if "no error" in lowered:
        return "no_error"
    if "yes error" in lowered:
        return "yes_error"
    return "yes_error"  # anything nonconforming fails closed


# --------------------------------------------------------------------------
# Template verbalization (offline path)


def _sentence_for(t: SurfaceTriplet) -> str:
    body = f"{t.subject} {t.relation} {t.object}"
    return body[0].upper() + body[1:] + "."


def _pair_sentence(a: SurfaceTriplet, b: SurfaceTriplet) -> str:
    body = f"{a.subject} {a.relation} {a.object}, and {b.subject} {b.relation} {b.object}"
    return body[0].upper() + body[1:] + "."


def template_verbalize(
    triplets: Sequence[SurfaceTriplet],
    registry: Optional[RelationRegistry] = None,
    rng: Optional[random.Random] = None,
) -> VerbalizedContext:
    """One sentence per 1-2 triplets; consecutive triplets sharing a subject
    may be folded into one sentence. Every triplet is mapped to exactly one
    sentence index."""
    rng = rng or random.Random(0)
    sentences: list[str] = []
    mapping: dict[str, tuple[int, ...]] = {}
    i = 0
    while i < len(triplets):
        t = triplets[i]
        fold = (
            i + 1 < len(triplets)
            and triplets[i + 1].subject == t.subject
            and rng.random() < 0.5
        )
        idx = len(sentences)
        if fold:
            u = triplets[i + 1]
            sentences.append(_pair_sentence(t, u))
            mapping[t.key()] = (idx,)
            mapping[u.key()] = (idx,)
            i += 2
        else:
            sentences.append(_sentence_for(t))
            mapping[t.key()] = (idx,)
            i += 1
    text = " ".join(sentences)
    return VerbalizedContext(
        text=text,
        sentences=split_sentences(text),
        triplet_sentence_map=mapping,
        source="template",
    )


# --------------------------------------------------------------------------
# Coverage checking


def _candidate_surfaces(label: str, entity_id: Optional[str], aliases: Optional[dict]) -> list[str]:
    out = [label]
    if aliases and entity_id and entity_id in aliases:
        out.extend(a for a in aliases[entity_id] if a not in out)
    return out


def _phrase_variants(t: SurfaceTriplet, registry: Optional[RelationRegistry]) -> list[str]:
    variants = [t.relation]
    entry = registry.get(t.relation_id) if (registry and t.relation_id) else None
    if entry:
        variants.append(entry.phrase)
        if entry.negated_phrase:
            variants.append(entry.negated_phrase)
        variants.append(entry.label)
    return variants


def triplet_covered_by_sentence(
    t: SurfaceTriplet,
    sentence: str,
    aliases: Optional[dict] = None,
    registry: Optional[RelationRegistry] = None,
) -> bool:
    norm = " " + normalize(sentence) + " "

    def present(surface: str) -> bool:
        ns = normalize(surface)
        return bool(ns) and f" {ns} " in norm

    subj_ok = any(present(s) for s in _candidate_surfaces(t.subject, t.subject_id, aliases))
    obj_ok = any(present(o) for o in _candidate_surfaces(t.object, t.object_id, aliases))
    if not (subj_ok and obj_ok):
        return False
    sent_tokens = tokens(sentence)
    for phrase in _phrase_variants(t, registry):
        pn = normalize(phrase)
        if pn and (f" {pn} " in norm or tokens(phrase) <= sent_tokens):
            return True
    return False


def covering_sentences(
    t: SurfaceTriplet,
    context: VerbalizedContext,
    aliases: Optional[dict] = None,
    registry: Optional[RelationRegistry] = None,
) -> tuple[int, ...]:
    mapped = context.triplet_sentence_map.get(t.key())
    if mapped:
        return mapped
    hits = tuple(
        i
        for i, span in enumerate(context.sentences)
        if triplet_covered_by_sentence(t, span.text, aliases, registry)
    )
    return hits


def coverage_check(
    conflict_triplets: Sequence[SurfaceTriplet],
    subgraph_triplets: Sequence[SurfaceTriplet],
    context: VerbalizedContext,
    aliases: Optional[dict] = None,
    registry: Optional[RelationRegistry] = None,
) -> CoverageReport:
    """A triplet counts as covered when subject and object surface forms
    co-occur within one sentence and the relation phrase token-matches."""
    missing: list[str] = []
    conflict_covered = True
    for t in conflict_triplets:
        if not covering_sentences(t, context, aliases, registry):
            missing.append(t.key())
            conflict_covered = False
    covered = 0
    for t in subgraph_triplets:
        if covering_sentences(t, context, aliases, registry):
            covered += 1
        else:
            missing.append(t.key())
    ratio = covered / len(subgraph_triplets) if subgraph_triplets else 0.0
    if not context.text:
        conflict_covered = False
        ratio = 0.0
    return CoverageReport(
        conflict_covered=conflict_covered,
        subgraph_coverage_ratio=ratio,
        missing_triplets=missing,
    )


def locate_gold_sentences(
    context_a: VerbalizedContext,
    context_b: VerbalizedContext,
    spec: ConflictSpec,
    aliases: Optional[dict] = None,
    registry: Optional[RelationRegistry] = None,
    graph=None,
) -> list[GoldPair]:
    """Per perturbation group: sentence indices in A realizing the original
    triplets and indices in B realizing the replacements. Raises when a group
    cannot be located on both sides (instance then goes to human review)."""
    from .conflicts import surface_form  # local import to avoid cycle at module load

    pairs: list[GoldPair] = []
    for gi, group in enumerate(spec.groups):
        a_idx: set[int] = set()
        for t in group.original_triplets:
            st = surface_form(t, graph, registry) if graph is not None else SurfaceTriplet(*t.as_tuple())
            a_idx.update(covering_sentences(st, context_a, aliases, registry))
        b_idx: set[int] = set()
        for st in group.replacement_triplets:
            b_idx.update(covering_sentences(st, context_b, aliases, registry))
        if not a_idx or not b_idx:
            raise UnlocatableGroupError(
                f"group {gi} not locatable (A side: {sorted(a_idx)}, B side: {sorted(b_idx)})"
            )
        pairs.append(
            GoldPair(
                a_indices=tuple(sorted(a_idx)),
                b_indices=tuple(sorted(b_idx)),
                a_texts=tuple(context_a.sentences[i].text for i in sorted(a_idx)),
                b_texts=tuple(context_b.sentences[i].text for i in sorted(b_idx)),
            )
        )
    return pairs
