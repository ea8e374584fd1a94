"""Detection prompting, response parsing, ID/LOC scoring, and aggregation.

ID is instance-binary over three runs: any missed run zeroes the instance.
LOC is instance-binary as well: full credit only when every gold conflicting
sentence pair is localized (under the selected run aggregation).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Optional, Sequence

from .errors import RatingError
from .gateway import ModelRequest
from .kgstore import Triplet
from .registry import RelationRegistry
from .verbalizer import GoldPair, normalize, tokens

RUNS_PER_INSTANCE = 3
DEFAULT_ALIGN_THRESHOLD = 0.6
PROBE_TRIALS = 5

PARSE_CLEAN = "clean"
PARSE_RECOVERED = "recovered"
PARSE_FAILED = "failed"


@dataclass
class ConflictClaim:
    reason: str
    sentence_a: str
    sentence_b: str


@dataclass
class DetectionResult:
    detected: bool
    n_claimed: int
    conflicts: list[ConflictClaim]
    parse_status: str
    raw: str

    def to_dict(self) -> dict:
        return {
            "detected": self.detected,
            "n_claimed": self.n_claimed,
            "conflicts": [
                {"reason": c.reason, "sentence_a": c.sentence_a, "sentence_b": c.sentence_b}
                for c in self.conflicts
            ],
            "parse_status": self.parse_status,
            "raw": self.raw,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DetectionResult":
        return cls(
            detected=data["detected"],
            n_claimed=data["n_claimed"],
            conflicts=[ConflictClaim(**c) for c in data.get("conflicts", [])],
            parse_status=data["parse_status"],
            raw=data.get("raw", ""),
        )


@dataclass
class ScoreSheet:
    instance_id: str
    id_score: int
    loc_score: int
    runs: list[DetectionResult]
    conflict_type: str = ""
    domains: tuple[str, ...] = ()
    relations: tuple[str, ...] = ()
    domain_count: int = 0
    length_bin: str = ""
    parametric_split: str = ""

    def key_values(self, group_by: str) -> list[str]:
        if group_by == "conflict_type":
            return [self.conflict_type]
        if group_by == "domain":
            return list(self.domains)
        if group_by == "relation":
            return list(self.relations)
        if group_by == "domain_count":
            return [str(self.domain_count)]
        if group_by == "length_bin":
            return [self.length_bin]
        if group_by == "parametric_split":
            return [self.parametric_split]
        raise ValueError(f"unknown aggregation key: {group_by}")

    def to_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "id_score": self.id_score,
            "loc_score": self.loc_score,
            "runs": [r.to_dict() for r in self.runs],
            "conflict_type": self.conflict_type,
            "domains": list(self.domains),
            "relations": list(self.relations),
            "domain_count": self.domain_count,
            "length_bin": self.length_bin,
            "parametric_split": self.parametric_split,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScoreSheet":
        return cls(
            instance_id=data["instance_id"],
            id_score=data["id_score"],
            loc_score=data["loc_score"],
            runs=[DetectionResult.from_dict(r) for r in data.get("runs", [])],
            conflict_type=data.get("conflict_type", ""),
            domains=tuple(data.get("domains", ())),
            relations=tuple(data.get("relations", ())),
            domain_count=data.get("domain_count", 0),
            length_bin=data.get("length_bin", ""),
            parametric_split=data.get("parametric_split", ""),
        )


# --------------------------------------------------------------------------
# Prompts


def _prompt(name: str) -> str:
    return resources.files("kgconflict.assets.prompts").joinpath(name).read_text("utf-8")


def build_detection_prompt(context_a: str, context_b: str, strategy: str = "multi_step") -> str:
    if not context_a or not context_b:
        raise ValueError("both contexts must be non-empty")
    if strategy == "binary":
        template = _prompt("detection_binary.txt")
    elif strategy == "multi_step":
        template = _prompt("detection_multi_step.txt")
    else:
        raise ValueError(f"unknown strategy: {strategy}")
    return template.format(context_a=context_a, context_b=context_b)


# --------------------------------------------------------------------------
# Response parsing

_NO_CONFLICTS_RE = re.compile(r"^\s*no conflicts?\.?\s*$", re.IGNORECASE)
_COUNT_RE = re.compile(r"^\s*conflicts\s*:\s*(\d+)\s*$", re.IGNORECASE)
_BLOCK_HEAD_RE = re.compile(r"^\s*conflict\s+(\d+)\s*:\s*$", re.IGNORECASE)
_FIELD_RE = re.compile(
    r"^\s*-\s*(reason|sentence a|sentence b)\s*:\s*(.*)$", re.IGNORECASE
)


def parse_detection_response(text, strategy: str = "multi_step") -> DetectionResult:
    """Total parser: never raises on arbitrary input; worst case is
    parse_status=failed with detected=false (scored against the model)."""
    if isinstance(text, bytes):
        raw = text.decode("utf-8", errors="replace")
    else:
        raw = str(text)

    if strategy == "binary":
        return _parse_binary(raw)

    lines = raw.splitlines()
    count: Optional[int] = None
    count_line: Optional[int] = None
    for i, line in enumerate(lines):
        if _NO_CONFLICTS_RE.match(line):
            return DetectionResult(False, 0, [], PARSE_CLEAN, raw)
        m = _COUNT_RE.match(line)
        if m and count is None:
            try:
                count = int(m.group(1))
            except ValueError:
                count = None
            else:
                count_line = i

    blocks = _extract_blocks(lines[count_line + 1 :] if count_line is not None else lines)
    if count is None and not blocks:
        return DetectionResult(False, 0, [], PARSE_FAILED, raw)

    n_claimed = count if count is not None else len(blocks)
    detected = n_claimed > 0 or bool(blocks)
    clean = (
        count is not None
        and count == len(blocks)
        and all(b.reason and b.sentence_a and b.sentence_b for b in blocks)
    )
    status = PARSE_CLEAN if clean else PARSE_RECOVERED
    complete = [b for b in blocks if b.sentence_a and b.sentence_b]
    if not detected:
        complete = []
    return DetectionResult(detected, n_claimed, complete, status, raw)


def _extract_blocks(lines: Sequence[str]) -> list[ConflictClaim]:
    blocks: list[ConflictClaim] = []
    current: Optional[dict] = None
    for line in lines:
        if _BLOCK_HEAD_RE.match(line):
            if current is not None:
                blocks.append(_finish_block(current))
            current = {}
            continue
        m = _FIELD_RE.match(line)
        if m and current is not None:
            key = m.group(1).lower().replace(" ", "_")
            current[key] = m.group(2).strip().strip('"')
    if current is not None:
        blocks.append(_finish_block(current))
    return [b for b in blocks if b.sentence_a or b.sentence_b or b.reason]


def _finish_block(data: dict) -> ConflictClaim:
    return ConflictClaim(
        reason=data.get("reason", ""),
        sentence_a=data.get("sentence_a", ""),
        sentence_b=data.get("sentence_b", ""),
    )


def _parse_binary(raw: str) -> DetectionResult:
    for line in raw.splitlines():
        words = re.findall(r"[a-z]+", line.casefold())
        if not words:
            continue
        if words[0] == "yes":
            return DetectionResult(True, 1, [], PARSE_CLEAN, raw)
        if words[0] == "no":
            return DetectionResult(False, 0, [], PARSE_CLEAN, raw)
        break
    return DetectionResult(False, 0, [], PARSE_FAILED, raw)


# --------------------------------------------------------------------------
# Localization matching


def _alignment(pred: str, sentence: str) -> float:
    """1.0 on normalized containment, else token Jaccard."""
    np_, ns = normalize(pred), normalize(sentence)
    if not np_ or not ns:
        return 0.0
    if np_ in ns or ns in np_:
        return 1.0
    tp, ts = tokens(pred), tokens(sentence)
    union = tp | ts
    return len(tp & ts) / len(union) if union else 0.0


def _side_score(pred: str, gold_texts: Sequence[str]) -> float:
    return max((_alignment(pred, g) for g in gold_texts), default=0.0)


def match_localization(
    result: DetectionResult,
    gold: Sequence[GoldPair],
    threshold: float = DEFAULT_ALIGN_THRESHOLD,
) -> list[bool]:
    """Greedy highest-similarity assignment of predicted conflicts to gold
    pairs; each prediction may satisfy at most one pair. A pair is matched
    only when both its A and B side align."""
    if not gold:
        raise ValueError("gold pair list must be non-empty")
    candidates = []
    for pi, claim in enumerate(result.conflicts):
        for gi, pair in enumerate(gold):
            sa = _side_score(claim.sentence_a, pair.a_texts)
            sb = _side_score(claim.sentence_b, pair.b_texts)
            if sa >= threshold and sb >= threshold:
                candidates.append((min(sa, sb), gi, pi))
    # Highest similarity first; ties resolved by gold order then prediction order.
    candidates.sort(key=lambda c: (-c[0], c[1], c[2]))
    matched = [False] * len(gold)
    used_preds: set[int] = set()
    for score, gi, pi in candidates:
        if matched[gi] or pi in used_preds:
            continue
        matched[gi] = True
        used_preds.add(pi)
    return matched


def score_instance(
    runs: Sequence[DetectionResult],
    gold: Sequence[GoldPair],
    agg: str = "all_runs",
    threshold: float = DEFAULT_ALIGN_THRESHOLD,
) -> tuple[int, int]:
    """ID/LOC under the chosen run aggregation (default: strict all-runs)."""
    if len(runs) != RUNS_PER_INSTANCE:
        raise ValueError(f"expected exactly {RUNS_PER_INSTANCE} runs, got {len(runs)}")
    detected = [r.detected and r.parse_status != PARSE_FAILED for r in runs]
    localized = [
        bool(gold) and all(match_localization(r, gold, threshold)) for r in runs
    ]
    if agg == "all_runs":
        id_score = int(all(detected))
        loc_score = int(all(detected) and all(localized))
    elif agg == "any_run":
        id_score = int(any(detected))
        loc_score = int(any(d and l for d, l in zip(detected, localized)))
    elif agg == "majority":
        id_score = int(sum(detected) >= 2)
        loc_score = int(sum(d and l for d, l in zip(detected, localized)) >= 2)
    else:
        raise ValueError(f"unknown aggregation: {agg}")
    return id_score, loc_score


# --------------------------------------------------------------------------
# Aggregation and binning


@dataclass
class AggregateRow:
    group: str
    mean_id: float
    mean_loc: float
    n: int


def aggregate(sheets: Sequence[ScoreSheet], group_by: str) -> list[AggregateRow]:
    """Mean scores (as percentages) per group with deterministic row order.
    Multi-valued keys (domain, relation) count an instance in every group it
    carries."""
    if not sheets:
        raise ValueError("sheets must be non-empty")
    groups: dict[str, list[ScoreSheet]] = {}
    for s in sheets:
        for key in s.key_values(group_by):
            groups.setdefault(key, []).append(s)
    rows = []
    for key in sorted(groups):
        members = groups[key]
        rows.append(
            AggregateRow(
                group=key,
                mean_id=round(100.0 * sum(m.id_score for m in members) / len(members), 2),
                mean_loc=round(100.0 * sum(m.loc_score for m in members) / len(members), 2),
                n=len(members),
            )
        )
    return rows


def format_report(rows: Sequence[AggregateRow], group_by: str) -> str:
    width = max([len(group_by)] + [len(r.group) for r in rows])
    lines = [f"{group_by:<{width}}  {'ID %':>7}  {'LOC %':>7}  {'n':>5}"]
    for r in rows:
        lines.append(f"{r.group:<{width}}  {r.mean_id:>7.2f}  {r.mean_loc:>7.2f}  {r.n:>5}")
    return "\n".join(lines)


def length_bins(instances: Sequence[tuple[str, int]], k: int = 4) -> dict[str, str]:
    """Quantile binning by total context token length: Q1 shortest .. Qk
    longest, bin sizes differing by at most one, ties broken by instance id."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not instances:
        raise ValueError("instances must be non-empty")
    ordered = sorted(instances, key=lambda x: (x[1], x[0]))
    n = len(ordered)
    base, extra = divmod(n, k)
    assignment: dict[str, str] = {}
    pos = 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        for inst_id, _length in ordered[pos : pos + size]:
            assignment[inst_id] = f"Q{b + 1}"
        pos += size
    return assignment


def whitespace_token_count(text: str) -> int:
    return len(text.split())


# --------------------------------------------------------------------------
# Parametric-knowledge probe and quality rating

KNOWN = "Known"
UNKNOWN = "Unknown"
AMBIGUOUS = "Ambiguous"


def probe_parametric(
    triplet: Triplet,
    registry: RelationRegistry,
    gateway,
    n_trials: int = PROBE_TRIALS,
    model_name: str = "probe",
    subject_label: Optional[str] = None,
    object_label: Optional[str] = None,
) -> str:
    """Ask the yes/no verification question n times; >=4 correct -> Known,
    <=1 -> Unknown, otherwise Ambiguous. An unparseable reply is incorrect."""
    entry = registry.get(triplet.relation)
    if entry is None:
        raise ValueError(f"no question template for relation {triplet.relation}")
    question = entry.question_template.format(
        subject=subject_label or triplet.subject,
        object=object_label or triplet.object,
    )
    correct = 0
    for trial in range(n_trials):
        response = gateway.complete(
            ModelRequest(model_name=model_name, user_text=question, run_index=trial)
        )
        parsed = _parse_binary(response.text)
        if parsed.parse_status != PARSE_FAILED and parsed.detected:
            correct += 1
    if correct >= 4:
        return KNOWN
    if correct <= 1:
        return UNKNOWN
    return AMBIGUOUS


_RATING_PROMPTS = {"naturalness": "rate_naturalness.txt", "realism": "rate_realism.txt"}


def rate_quality(context: str, dimension: str, gateway, model_name: str = "rater") -> int:
    if not context:
        raise ValueError("context must be non-empty")
    if dimension not in _RATING_PROMPTS:
        raise ValueError(f"unknown rating dimension: {dimension}")
    prompt = _prompt(_RATING_PROMPTS[dimension]).format(context=context)
    response = gateway.complete(ModelRequest(model_name=model_name, user_text=prompt))
    text = response.text.strip()
    if not re.fullmatch(r"[0-5]", text):
        raise RatingError(f"expected a single integer 0-5, got {text[:40]!r}")
    return int(text)
