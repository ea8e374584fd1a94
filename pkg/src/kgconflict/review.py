"""HTTP service backing the two-stage human review workflow.

Stage 1 curates few-shot demonstrations; stage 2 filters generated instances.
Decisions are an append-only log; current status is a fold over that log, and
item leasing keeps two reviewers from ever receiving the same pending item.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import KgConflictError

KINDS = ("demonstration", "instance")
STATUSES = ("pending", "accepted", "rejected")


class ReviewConflictError(KgConflictError):
    pass


class ReviewNotFoundError(KgConflictError):
    pass


def load_criteria() -> dict[str, list[dict]]:
    text = resources.files("kgconflict.assets").joinpath("review_criteria.json").read_text("utf-8")
    return json.loads(text)


@dataclass
class Decision:
    reviewer: str
    verdict: str  # accepted | rejected
    checklist: dict[str, bool]
    note: str = ""
    timestamp: float = 0.0

    def to_dict(self) -> dict:
        return {
            "reviewer": self.reviewer,
            "verdict": self.verdict,
            "checklist": self.checklist,
            "note": self.note,
            "timestamp": self.timestamp,
        }


@dataclass
class ReviewItem:
    item_id: str
    kind: str
    payload: dict
    status: str = "pending"
    decision: Optional[Decision] = None
    leased_to: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "item_id": self.item_id,
            "kind": self.kind,
            "payload": self.payload,
            "status": self.status,
            "decision": self.decision.to_dict() if self.decision else None,
            "leased_to": self.leased_to,
        }


class ReviewStore:
    """Single-writer persistence: every mutation is an appended log event,
    state is rebuilt by folding the log on open."""

    def __init__(self, data_dir: Optional[str | Path] = None):
        self._lock = threading.Lock()
        self.items: dict[str, ReviewItem] = {}
        self._order: list[str] = []
        self.criteria = load_criteria()
        self._log_path: Optional[Path] = None
        if data_dir is not None:
            data_dir = Path(data_dir)
            data_dir.mkdir(parents=True, exist_ok=True)
            self._log_path = data_dir / "review-log.jsonl"
            self._replay_log()

    def _replay_log(self) -> None:
        if self._log_path is None or not self._log_path.exists():
            return
        with open(self._log_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    self._apply(json.loads(line))

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "enqueue":
            item = ReviewItem(
                item_id=event["item_id"], kind=event["kind"], payload=event["payload"]
            )
            self.items[item.item_id] = item
            self._order.append(item.item_id)
        elif kind == "lease":
            item = self.items.get(event["item_id"])
            if item is not None:
                item.leased_to = event["reviewer"]
        elif kind == "decision":
            item = self.items.get(event["item_id"])
            if item is not None and item.status == "pending":
                d = event["decision"]
                item.decision = Decision(
                    reviewer=d["reviewer"],
                    verdict=d["verdict"],
                    checklist=d.get("checklist", {}),
                    note=d.get("note", ""),
                    timestamp=d.get("timestamp", 0.0),
                )
                item.status = item.decision.verdict

    def _append(self, event: dict) -> None:
        # Durable before acknowledgement: flushed to the log, then applied.
        if self._log_path is not None:
            with open(self._log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, ensure_ascii=False) + "\n")
                fh.flush()
        self._apply(event)

    # -- operations ---------------------------------------------------------

    def enqueue(self, items: list[dict]) -> int:
        with self._lock:
            count = 0
            for raw in items:
                kind = raw.get("kind")
                if kind not in KINDS:
                    raise ValueError(f"unknown item kind: {kind!r}")
                item_id = raw.get("item_id") or f"{kind}-{len(self._order) + 1:06d}"
                if item_id in self.items:
                    raise ReviewConflictError(f"duplicate item id: {item_id}")
                self._append(
                    {
                        "event": "enqueue",
                        "item_id": item_id,
                        "kind": kind,
                        "payload": raw.get("payload", {}),
                    }
                )
                count += 1
            return count

    def next_pending(self, kind: str, reviewer: str) -> Optional[ReviewItem]:
        """Lease the next pending item of the kind; items leased to another
        reviewer are never served, so reviewer assignments stay disjoint."""
        with self._lock:
            for item_id in self._order:
                item = self.items[item_id]
                if item.kind != kind or item.status != "pending":
                    continue
                if item.leased_to is None:
                    self._append({"event": "lease", "item_id": item_id, "reviewer": reviewer})
                    return item
                if item.leased_to == reviewer:
                    return item
            return None

    def get(self, item_id: str) -> ReviewItem:
        item = self.items.get(item_id)
        if item is None:
            raise ReviewNotFoundError(f"unknown item: {item_id}")
        return item

    def submit_decision(
        self,
        item_id: str,
        reviewer: str,
        verdict: str,
        checklist: dict[str, bool],
        note: str = "",
    ) -> ReviewItem:
        with self._lock:
            item = self.get(item_id)
            if item.status != "pending":
                raise ReviewConflictError(f"item {item_id} already decided ({item.status})")
            if verdict not in ("accepted", "rejected"):
                raise ValueError(f"verdict must be accepted or rejected, got {verdict!r}")
            allowed = {c["key"] for c in self.criteria.get(item.kind, [])}
            unknown = set(checklist) - allowed
            if unknown:
                raise ValueError(f"unknown checklist keys for {item.kind}: {sorted(unknown)}")
            self._append(
                {
                    "event": "decision",
                    "item_id": item_id,
                    "decision": {
                        "reviewer": reviewer,
                        "verdict": verdict,
                        "checklist": checklist,
                        "note": note,
                        "timestamp": time.time(),
                    },
                }
            )
            return item

    def export_accepted(self, kind: str) -> list[ReviewItem]:
        with self._lock:
            return [
                self.items[i]
                for i in self._order
                if self.items[i].kind == kind and self.items[i].status == "accepted"
            ]

    def stats(self) -> dict:
        with self._lock:
            out: dict = {}
            for kind in KINDS:
                counts = {s: 0 for s in STATUSES}
                for item in self.items.values():
                    if item.kind == kind:
                        counts[item.status] += 1
                out[kind] = counts
            return out


def create_app(store: Optional[ReviewStore] = None, console_dir: Optional[str | Path] = None):
    """FastAPI application exposing the review queue over HTTP/JSON."""
    from fastapi import FastAPI, Header, HTTPException, Query
    from fastapi.responses import JSONResponse

    store = store or ReviewStore()
    app = FastAPI(title="kgconflict review api")
    app.state.store = store

    def reviewer_id(header: Optional[str], query: Optional[str]) -> str:
        reviewer = query or header
        if not reviewer:
            raise HTTPException(status_code=400, detail="reviewer id required")
        return reviewer

    @app.get("/api/queue")
    def queue(
        kind: str = Query(...),
        reviewer: Optional[str] = Query(None),
        x_reviewer: Optional[str] = Header(None),
    ):
        if kind not in KINDS:
            raise HTTPException(status_code=400, detail=f"unknown kind: {kind}")
        item = store.next_pending(kind, reviewer_id(x_reviewer, reviewer))
        if item is None:
            return JSONResponse({"item": None, "stats": store.stats()})
        return JSONResponse({"item": item.to_dict(), "stats": store.stats()})

    @app.get("/api/items/{item_id}")
    def get_item(item_id: str):
        try:
            return JSONResponse(store.get(item_id).to_dict())
        except ReviewNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/api/items/{item_id}/decision")
    def decide(item_id: str, body: dict):
        try:
            item = store.submit_decision(
                item_id,
                reviewer=body.get("reviewer", ""),
                verdict=body.get("verdict", ""),
                checklist=body.get("checklist", {}),
                note=body.get("note", ""),
            )
        except ReviewNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ReviewConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return JSONResponse(item.to_dict())

    @app.post("/api/items")
    def enqueue(body: dict):
        try:
            count = store.enqueue(body.get("items", []))
        except (ValueError, ReviewConflictError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return JSONResponse({"enqueued": count})

    @app.get("/api/export")
    def export(kind: str = Query(...)):
        if kind not in KINDS:
            raise HTTPException(status_code=400, detail=f"unknown kind: {kind}")
        items = store.export_accepted(kind)
        return JSONResponse({"count": len(items), "items": [i.to_dict() for i in items]})

    @app.get("/api/stats")
    def stats():
        return JSONResponse(store.stats())

    @app.get("/api/criteria")
    def criteria():
        return JSONResponse(store.criteria)

    if console_dir is not None and Path(console_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(console_dir), html=True), name="console")

    return app
