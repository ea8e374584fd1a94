"""Uniform access to chat-completion endpoints with record/replay caching.

Replay mode performs no network activity at all; record mode persists every
response under a content-hash key so evaluation runs are reproducible.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

from .errors import CacheMissError, TransportError

CACHE_FORMAT_VERSION = 1

ENV_URL = "KGCONFLICT_API_URL"
ENV_KEY = "KGCONFLICT_API_KEY"
ENV_MODEL = "KGCONFLICT_MODEL"


@dataclass(frozen=True)
class ModelRequest:
    model_name: str
    user_text: str
    system_text: str = ""
    temperature: float = 0.0
    max_tokens: int = 2048
    run_index: int = 0

    def __post_init__(self):
        if not self.user_text:
            raise ValueError("user_text must be non-empty")
        if self.run_index < 0:
            raise ValueError("run_index must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


@dataclass
class ModelResponse:
    text: str
    usage: dict = field(default_factory=dict)
    latency: float = 0.0
    cache_hit: bool = False


def cache_key(request: ModelRequest) -> str:
    """Stable content hash over every request field, including run_index so
    the three independent runs of one prompt get distinct entries."""
    payload = json.dumps(
        {
            "model_name": request.model_name,
            "system_text": request.system_text,
            "user_text": request.user_text,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
            "run_index": request.run_index,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


Transport = Callable[[ModelRequest], str]


def http_transport(request: ModelRequest) -> str:
    """Chat-completions-style HTTP POST; endpoint and key from environment."""
    import httpx

    url = os.environ.get(ENV_URL)
    if not url:
        raise TransportError(f"live mode requires {ENV_URL} to be set")
    headers = {"Content-Type": "application/json"}
    api_key = os.environ.get(ENV_KEY)
    if api_key:
        headers["Authorization"] = f"Bearer {api_key}"
    messages = []
    if request.system_text:
        messages.append({"role": "system", "content": request.system_text})
    messages.append({"role": "user", "content": request.user_text})
    body = {
        "model": request.model_name,
        "messages": messages,
        "temperature": request.temperature,
        "max_tokens": request.max_tokens,
    }
    resp = httpx.post(url.rstrip("/") + "/chat/completions", json=body, headers=headers, timeout=120.0)
    resp.raise_for_status()
    data = resp.json()
    return data["choices"][0]["message"]["content"]


class TokenBucket:
    def __init__(self, rate_per_second: float, burst: Optional[float] = None):
        self.rate = rate_per_second
        self.capacity = burst if burst is not None else max(1.0, rate_per_second)
        self.tokens = self.capacity
        self.updated = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self.tokens = min(self.capacity, self.tokens + (now - self.updated) * self.rate)
                self.updated = now
                if self.tokens >= 1.0:
                    self.tokens -= 1.0
                    return
                wait = (1.0 - self.tokens) / self.rate
            time.sleep(wait)


class ModelGateway:
    """Record / replay / live completion with retries and bounded concurrency."""

    def __init__(
        self,
        mode: str = "replay",
        cache_dir: Optional[str | Path] = None,
        transport: Optional[Transport] = None,
        max_in_flight: int = 4,
        max_attempts: int = 4,
        backoff_base: float = 0.5,
        rate_per_second: Optional[float] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if mode not in ("live", "record", "replay"):
            raise ValueError(f"unknown gateway mode: {mode}")
        if mode in ("record", "replay") and cache_dir is None:
            raise ValueError(f"{mode} mode requires a cache directory")
        self.mode = mode
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.transport = transport or http_transport
        self.max_attempts = max_attempts
        self.backoff_base = backoff_base
        self._sleep = sleep
        self._semaphore = threading.Semaphore(max_in_flight)
        self._bucket = TokenBucket(rate_per_second) if rate_per_second else None

    # -- cache plumbing ----------------------------------------------------

    def _cache_path(self, key: str) -> Path:
        assert self.cache_dir is not None
        return self.cache_dir / f"{key}.json"

    def _read_cache(self, key: str) -> Optional[ModelResponse]:
        path = self._cache_path(key)
        if not path.exists():
            return None
        data = json.loads(path.read_text(encoding="utf-8"))
        if data.get("version") != CACHE_FORMAT_VERSION:
            raise TransportError(f"unsupported cache format version in {path}")
        r = data["response"]
        return ModelResponse(text=r["text"], usage=r.get("usage", {}), cache_hit=True)

    def _write_cache(self, key: str, request: ModelRequest, response: ModelResponse) -> None:
        assert self.cache_dir is not None
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self._cache_path(key)
        payload = {
            "version": CACHE_FORMAT_VERSION,
            "key": key,
            "request": {
                "model_name": request.model_name,
                "system_text": request.system_text,
                "user_text": request.user_text,
                "temperature": request.temperature,
                "max_tokens": request.max_tokens,
                "run_index": request.run_index,
            },
            "response": {"text": response.text, "usage": response.usage},
        }
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
        tmp.replace(path)  # atomic on POSIX

    # -- completion --------------------------------------------------------

    def complete(self, request: ModelRequest) -> ModelResponse:
        key = cache_key(request)
        if self.mode == "replay":
            cached = self._read_cache(key)
            if cached is None:
                raise CacheMissError(key)
            return cached
        if self.mode == "record":
            cached = self._read_cache(key)
            if cached is not None:
                return cached
        response = self._call_with_retry(request)
        if self.mode == "record":
            self._write_cache(key, request, response)
        return response

    def _call_with_retry(self, request: ModelRequest) -> ModelResponse:
        last_error: Optional[Exception] = None
        for attempt in range(self.max_attempts):
            if attempt:
                self._sleep(self.backoff_base * (2 ** (attempt - 1)))
            if self._bucket:
                self._bucket.acquire()
            with self._semaphore:
                started = time.monotonic()
                try:
                    text = self.transport(request)
                    return ModelResponse(text=text, latency=time.monotonic() - started)
                except Exception as exc:  # transport failures are retryable
                    last_error = exc
        raise TransportError(
            f"transport failed after {self.max_attempts} attempts: {last_error}"
        ) from last_error


class ScriptedGateway:
    """Test double: maps exact user_text (or a fallback) to canned responses."""

    def __init__(self, responses: Optional[dict[str, str]] = None, default: Optional[str] = None,
                 responder: Optional[Callable[[ModelRequest], str]] = None):
        self.responses = dict(responses or {})
        self.default = default
        self.responder = responder
        self.calls: list[ModelRequest] = []

    def complete(self, request: ModelRequest) -> ModelResponse:
        self.calls.append(request)
        if self.responder is not None:
            return ModelResponse(text=self.responder(request))
        if request.user_text in self.responses:
            return ModelResponse(text=self.responses[request.user_text])
        if self.default is not None:
            return ModelResponse(text=self.default)
        raise CacheMissError(cache_key(request))
