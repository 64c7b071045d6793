"""Prompt completion behind a small backend protocol.

A backend is any object with ``complete(request) -> str`` that raises an
:class:`LLMError` subclass on failure. Three are provided: an HTTP client for
OpenAI-compatible chat-completion servers, a fixture-driven mock, and a
backend that always misses (for offline runs against a warm cache).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import tempfile
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Protocol

import requests

logger = logging.getLogger(__name__)

MAX_PROMPT_CHARS = 12_000
DEFAULT_TEMPERATURE = 0.0
DEFAULT_MAX_OUTPUT_TOKENS = 500
DEFAULT_BASE_URL = "https://api.openai.com/v1"

API_KEY_ENV = "MAPPERGPT_API_KEY"
BASE_URL_ENV = "MAPPERGPT_BASE_URL"

RETRY_ATTEMPTS = 5
RETRY_BASE_DELAY = 2.0
RETRY_FACTOR = 2.0
RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})


class LLMError(Exception):
    """Base class for completion failures."""


class TransportError(LLMError):
    """The endpoint could not be reached."""


class ProtocolError(LLMError):
    def __init__(self, status: int, body: str):
        self.status = status
        self.body = body[:300]
        super().__init__(f"HTTP {status}: {self.body}")


class RateLimitError(ProtocolError):
    pass


class MalformedReplyError(LLMError):
    pass


class LookupMissError(LLMError):
    """No canned response exists for a request (mock and cache-only backends)."""


class PromptTooLongError(ValueError):
    pass


@dataclass(frozen=True)
class CompletionRequest:
    model_name: str
    prompt: str
    temperature: float = DEFAULT_TEMPERATURE
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS

    def __post_init__(self):
        if not self.prompt:
            raise ValueError("prompt must be non-empty")
        if len(self.prompt) > MAX_PROMPT_CHARS:
            raise PromptTooLongError(
                f"prompt has {len(self.prompt)} characters; the limit is {MAX_PROMPT_CHARS}"
            )
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError(f"temperature {self.temperature} outside [0, 2]")
        if self.max_output_tokens <= 0:
            raise ValueError("max_output_tokens must be positive")

    @property
    def cache_key(self) -> str:
        payload = json.dumps([self.model_name, float(self.temperature), self.prompt], ensure_ascii=False)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class CompletionBackend(Protocol):
    def complete(self, request: CompletionRequest) -> str: ...


def complete(backend: CompletionBackend, request: CompletionRequest) -> str:
    return backend.complete(request)


class HttpBackend:
    """Client for a ``/chat/completions`` endpoint.

    Rate limiting (429), gateway errors and connection failures are retried
    with exponential backoff; any other non-2xx status fails immediately.
    """

    def __init__(
        self,
        base_url: Optional[str] = None,
        api_key: Optional[str] = None,
        timeout: float = 60.0,
        max_attempts: int = RETRY_ATTEMPTS,
        base_delay: float = RETRY_BASE_DELAY,
        factor: float = RETRY_FACTOR,
        sleep: Callable[[float], None] = time.sleep,
        session: Optional[requests.Session] = None,
    ):
        self.base_url = (base_url or os.environ.get(BASE_URL_ENV) or DEFAULT_BASE_URL).rstrip("/")
        self.api_key = api_key if api_key is not None else os.environ.get(API_KEY_ENV)
        self.timeout = timeout
        self.max_attempts = min(max_attempts, RETRY_ATTEMPTS)
        self.base_delay = base_delay
        self.factor = factor
        self.sleep = sleep
        self._local = threading.local()
        self._session = session

    @property
    def session(self) -> requests.Session:
        if self._session is not None:
            return self._session
        if not hasattr(self._local, "session"):
            self._local.session = requests.Session()
        return self._local.session

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def _body(self, request: CompletionRequest) -> dict:
        return {
            "model": request.model_name,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_output_tokens,
        }

    def complete(self, request: CompletionRequest) -> str:
        url = f"{self.base_url}/chat/completions"
        body = self._body(request)
        delay = self.base_delay
        for attempt in range(1, self.max_attempts + 1):
            last = attempt == self.max_attempts
            try:
                resp = self.session.post(url, json=body, headers=self._headers(), timeout=self.timeout)
            except (requests.ConnectionError, requests.Timeout) as exc:
                if last:
                    raise TransportError(f"{url}: {exc}") from exc
                logger.warning("attempt %d/%d failed (%s); retrying in %.0fs", attempt, self.max_attempts, exc, delay)
            else:
                if resp.ok:
                    return _extract_message(resp)
                if resp.status_code not in RETRY_STATUSES or last:
                    cls = RateLimitError if resp.status_code == 429 else ProtocolError
                    raise cls(resp.status_code, resp.text)
                logger.warning(
                    "attempt %d/%d got HTTP %d; retrying in %.0fs", attempt, self.max_attempts, resp.status_code, delay
                )
            self.sleep(delay)
            delay *= self.factor
        raise AssertionError("unreachable")


def _extract_message(resp: requests.Response) -> str:
    try:
        data = resp.json()
    except ValueError as exc:
        raise MalformedReplyError(f"reply is not JSON: {resp.text[:200]}") from exc
    choices = data.get("choices") if isinstance(data, dict) else None
    if not choices:
        raise MalformedReplyError("reply has no choices")
    try:
        content = choices[0]["message"]["content"]
    except (KeyError, TypeError, IndexError) as exc:
        raise MalformedReplyError("first choice has no message content") from exc
    if not isinstance(content, str):
        raise MalformedReplyError("message content is not text")
    return content


_CONCEPTS_MARKER = "Here are the two concepts:"
_PAIR_RE = re.compile(r"\s*\[Concept A\]\s*id: (\S+).*?\[Concept B\]\s*id: (\S+)", re.DOTALL)

# gpt-3.5-turbo's answer for FBbt:00001906 vs ZFA:0000320, served by the
# default mock so the worked example runs without fixtures.
WORKED_EXAMPLE_RESPONSE = (
    "category: DIFFERENT\n"
    "confidence: HIGH\n"
    "similarities: NONE\n"
    "differences: A is a type of cell in the embryonic/larval Malpighian tubules; "
    "B is a diencephalic tract in the zebrafish brain.\n"
    "subject: FBbt:00001906\n"
    "object: ZFA:0000320\n"
)
BUILTIN_PAIR_RESPONSES = {("FBbt:00001906", "ZFA:0000320"): WORKED_EXAMPLE_RESPONSE}


def prompt_concept_pair(prompt: str) -> Optional[tuple[str, str]]:
    """Ids of the two concepts under review in a rendered prompt."""
    start = prompt.rfind(_CONCEPTS_MARKER)
    if start < 0:
        return None
    m = _PAIR_RE.match(prompt, start + len(_CONCEPTS_MARKER))
    return (m.group(1), m.group(2)) if m else None


class MockBackend:
    """Deterministic backend answering from fixtures.

    Lookup order: cache key, exact prompt, then the (concept A, concept B)
    id pair found in the prompt. A request matching none of them raises
    :class:`LookupMissError`.

    A fixture directory may contain ``<cache key>.txt`` response files (the
    same layout :func:`cached_complete` writes) and an optional
    ``lookup.jsonl`` whose lines carry ``response`` plus either ``prompt``
    or ``subject_id``/``object_id``.
    """

    def __init__(self, by_key=None, by_prompt=None, by_pair=None):
        self.by_key: dict[str, str] = dict(by_key or {})
        self.by_prompt: dict[str, str] = dict(by_prompt or {})
        self.by_pair: dict[tuple[str, str], str] = dict(by_pair or {})
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_dir(cls, path, **defaults) -> "MockBackend":
        path = Path(path)
        mock = cls(**defaults)
        for f in sorted(path.glob("*.txt")):
            mock.by_key[f.stem] = f.read_text(encoding="utf-8")
        table = path / "lookup.jsonl"
        if table.exists():
            for lineno, line in enumerate(table.read_text(encoding="utf-8").splitlines(), start=1):
                if not line.strip():
                    continue
                entry = json.loads(line)
                if "response" not in entry:
                    raise ValueError(f"{table}:{lineno}: entry has no response")
                if "prompt" in entry:
                    mock.by_prompt[entry["prompt"]] = entry["response"]
                elif "subject_id" in entry and "object_id" in entry:
                    mock.by_pair[(entry["subject_id"], entry["object_id"])] = entry["response"]
                else:
                    raise ValueError(f"{table}:{lineno}: entry needs prompt or subject_id/object_id")
        return mock

    def complete(self, request: CompletionRequest) -> str:
        with self._lock:
            self.calls += 1
        if request.cache_key in self.by_key:
            return self.by_key[request.cache_key]
        if request.prompt in self.by_prompt:
            return self.by_prompt[request.prompt]
        pair = prompt_concept_pair(request.prompt)
        if pair is not None and pair in self.by_pair:
            return self.by_pair[pair]
        raise LookupMissError(f"no mock response for request {request.cache_key[:12]} (pair {pair})")


class CacheOnlyBackend:
    """Refuses every request; pair with :func:`cached_complete` for offline runs."""

    def complete(self, request: CompletionRequest) -> str:
        raise LookupMissError(f"cache miss for {request.cache_key} and network access is disabled")


_key_locks: dict[str, threading.Lock] = {}
_key_locks_guard = threading.Lock()


def _lock_for(path: Path) -> threading.Lock:
    with _key_locks_guard:
        return _key_locks.setdefault(str(path), threading.Lock())


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def cached_complete(backend: CompletionBackend, cache_dir, request: CompletionRequest) -> str:
    """Complete ``request``, reading and writing ``cache_dir/<key>.txt``."""
    cache_dir = Path(cache_dir)
    path = cache_dir / f"{request.cache_key}.txt"
    with _lock_for(path):
        if path.exists():
            with open(path, encoding="utf-8", newline="") as fh:
                return fh.read()
        text = backend.complete(request)
        try:
            cache_dir.mkdir(parents=True, exist_ok=True)
            _atomic_write(path, text)
        except OSError as exc:
            logger.warning("could not write cache entry %s: %s", path, exc)
        return text
