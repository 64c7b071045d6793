"""Parsing model answers and reviewing candidate mappings with a model."""

from __future__ import annotations

import logging
import re
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .llm import (
    DEFAULT_MAX_OUTPUT_TOKENS,
    DEFAULT_TEMPERATURE,
    CompletionBackend,
    CompletionRequest,
    LLMError,
    cached_complete,
)
from .ontology import Ontology
from .promptgen import DEFAULT_EXAMPLES, generate_prompt
from .sssom import MAPPING_REVIEW, MappingRecord, MappingSet
from .vocab import CONFIDENCE_SCORES, Category, Confidence, category_to_predicate

logger = logging.getLogger(__name__)

_KEY_RE = re.compile(r"^\s*(category|confidence|similarities|differences)\s*:(.*)$", re.IGNORECASE)


class ResponseParseError(ValueError):
    def __init__(self, message: str, raw_response: str):
        super().__init__(message)
        self.raw_response = raw_response


class RefinementAborted(RuntimeError):
    """A backend failure stopped the review of a mapping set."""


@dataclass(frozen=True)
class RefinementResult:
    category: Category
    confidence: Confidence
    similarities: list[str]
    differences: list[str]
    raw_response: str
    warnings: tuple[str, ...] = ()


def _split_items(value: str) -> list[str]:
    items = [item.strip() for item in value.split(";")]
    items = [item for item in items if item]
    if len(items) == 1 and items[0].upper() == "NONE":
        return []
    return items


def parse_response(text: str) -> RefinementResult:
    """Extract category, confidence, similarities and differences.

    Only the first occurrence of each key counts; any other line is ignored.
    A missing or unknown confidence falls back to LOW with a warning.

    Raises:
        ResponseParseError: when no recognizable category is present.
    """
    values: dict[str, str] = {}
    for line in text.splitlines():
        m = _KEY_RE.match(line)
        if m:
            values.setdefault(m.group(1).lower(), m.group(2).strip())

    if "category" not in values:
        raise ResponseParseError("response has no category line", text)
    try:
        category = Category(values["category"].upper())
    except ValueError:
        raise ResponseParseError(f"unrecognized category {values['category']!r}", text) from None

    warnings = []
    try:
        confidence = Confidence(values.get("confidence", "").upper())
    except ValueError:
        warnings.append(f"missing or unrecognized confidence {values.get('confidence')!r}; using LOW")
        logger.warning(warnings[-1])
        confidence = Confidence.LOW

    return RefinementResult(
        category=category,
        confidence=confidence,
        similarities=_split_items(values.get("similarities", "")),
        differences=_split_items(values.get("differences", "")),
        raw_response=text,
        warnings=tuple(warnings),
    )


@dataclass
class RefineConfig:
    model_name: str = "gpt-4"
    temperature: float = DEFAULT_TEMPERATURE
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    cache_dir: Optional[Path] = None
    parallel: int = 1
    lenient: bool = False
    examples: tuple = DEFAULT_EXAMPLES


@dataclass
class RefineSummary:
    reviewed: int = 0
    unresolved: int = 0
    parse_failures: int = 0
    backend_failures: int = 0
    categories: dict[str, int] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def bump(self, name: str, category: Optional[Category] = None) -> None:
        with self._lock:
            setattr(self, name, getattr(self, name) + 1)
            if category is not None:
                self.categories[category.value] = self.categories.get(category.value, 0) + 1


def _review_comment(result: RefinementResult) -> Optional[str]:
    parts = []
    if result.similarities:
        parts.append("similarities: " + "; ".join(result.similarities))
    if result.differences:
        parts.append("differences: " + "; ".join(result.differences))
    return _one_line(" | ".join(parts)) or None


def _one_line(text: str) -> str:
    return " ".join(text.split())


def _flag(record: MappingRecord, note: str) -> MappingRecord:
    comment = f"{note}; {record.comment}" if record.comment else note
    return record.evolve(comment=_one_line(comment))


def review_record(
    record: MappingRecord,
    o1: Ontology,
    o2: Ontology,
    backend: CompletionBackend,
    config: RefineConfig,
    summary: Optional[RefineSummary] = None,
) -> MappingRecord:
    """Review one candidate and return its refined record."""
    summary = summary if summary is not None else RefineSummary()
    a, b = o1.get(record.subject_id), o2.get(record.object_id)
    if a is None or b is None:
        missing = record.subject_id if a is None else record.object_id
        summary.bump("unresolved")
        return _flag(record, f"review_skipped: {missing} not found in input ontologies")

    request = CompletionRequest(
        model_name=config.model_name,
        prompt=generate_prompt(a, b, o1, o2, config.examples),
        temperature=config.temperature,
        max_output_tokens=config.max_output_tokens,
    )
    try:
        if config.cache_dir is not None:
            text = cached_complete(backend, config.cache_dir, request)
        else:
            text = backend.complete(request)
    except LLMError as exc:
        summary.bump("backend_failures")
        if not config.lenient:
            raise RefinementAborted(f"{record.subject_id} -> {record.object_id}: {exc}") from exc
        logger.warning("backend failure for %s -> %s: %s", record.subject_id, record.object_id, exc)
        return _flag(record, f"review_skipped: backend failure ({type(exc).__name__})")

    try:
        result = parse_response(text)
    except ResponseParseError as exc:
        summary.bump("parse_failures")
        return _flag(record, f"review_failed: {exc}")

    summary.bump("reviewed", result.category)
    return record.evolve(
        predicate_id=category_to_predicate(result.category),
        confidence=CONFIDENCE_SCORES[result.confidence],
        mapping_justification=MAPPING_REVIEW,
        comment=_review_comment(result),
    )


def refine_mappings(
    m_in: MappingSet,
    o1: Ontology,
    o2: Ontology,
    backend: CompletionBackend,
    config: Optional[RefineConfig] = None,
    summary: Optional[RefineSummary] = None,
) -> MappingSet:
    """Review every candidate in ``m_in``; output order matches input order.

    Raises:
        RefinementAborted: on a backend failure unless ``config.lenient``.
    """
    config = config or RefineConfig()
    summary = summary if summary is not None else RefineSummary()
    records = list(m_in.records)

    def work(rec):
        return review_record(rec, o1, o2, backend, config, summary)

    if config.parallel > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=config.parallel) as pool:
            out = list(pool.map(work, records))
    else:
        out = [work(rec) for rec in records]

    metadata = dict(m_in.metadata)
    metadata["mapping_tool"] = "mappergpt"
    metadata["review_model"] = config.model_name
    logger.info(
        "reviewed %d, unresolved %d, parse failures %d, backend failures %d",
        summary.reviewed,
        summary.unresolved,
        summary.parse_failures,
        summary.backend_failures,
    )
    return MappingSet(tuple(out), metadata)
