"""Reading and writing SSSOM mapping sets (TSV plus a ``#key: value`` header)."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, fields, replace
from typing import Optional

logger = logging.getLogger(__name__)

EXACT_MATCH = "skos:exactMatch"
CLOSE_MATCH = "skos:closeMatch"
BROAD_MATCH = "skos:broadMatch"
NARROW_MATCH = "skos:narrowMatch"
RELATED_MATCH = "skos:relatedMatch"
DIFFERENT_FROM = "owl:differentFrom"

PREDICATES = (EXACT_MATCH, CLOSE_MATCH, BROAD_MATCH, NARROW_MATCH, RELATED_MATCH, DIFFERENT_FROM)

LEXICAL_MATCHING = "semapv:LexicalMatching"
MANUAL_CURATION = "semapv:ManualMappingCuration"
MAPPING_REVIEW = "semapv:MappingReview"

COLUMNS = (
    "subject_id",
    "subject_label",
    "predicate_id",
    "object_id",
    "object_label",
    "mapping_justification",
    "confidence",
    "similarity_score",
    "comment",
)
REQUIRED_COLUMNS = ("subject_id", "predicate_id", "object_id", "mapping_justification")

_FORBIDDEN = ("\t", "\n", "\r")


class SssomError(ValueError):
    """Raised for malformed SSSOM input or invalid mapping records."""


@dataclass(frozen=True)
class MappingRecord:
    subject_id: str
    predicate_id: str
    object_id: str
    mapping_justification: str
    subject_label: Optional[str] = None
    object_label: Optional[str] = None
    confidence: Optional[float] = None
    similarity_score: Optional[float] = None
    comment: Optional[str] = None

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, str) and any(c in value for c in _FORBIDDEN):
                raise SssomError(f"{f.name} may not contain tabs or line breaks: {value!r}")
        for name in REQUIRED_COLUMNS:
            if not getattr(self, name):
                raise SssomError(f"{name} is required")
        if self.predicate_id not in PREDICATES:
            raise SssomError(f"predicate {self.predicate_id!r} is not in the supported vocabulary")
        if self.subject_id == self.object_id and self.predicate_id != EXACT_MATCH:
            raise SssomError(f"self-mapping of {self.subject_id} must use {EXACT_MATCH}")
        if self.confidence is not None and not 0.0 <= self.confidence <= 1.0:
            raise SssomError(f"confidence {self.confidence} outside [0, 1]")
        if self.similarity_score is not None and not math.isfinite(self.similarity_score):
            raise SssomError("similarity_score must be finite")

    @property
    def triple(self) -> tuple[str, str, str]:
        return (self.subject_id, self.object_id, self.predicate_id)

    @property
    def pair(self) -> tuple[str, str]:
        return (self.subject_id, self.object_id)

    def evolve(self, **changes) -> "MappingRecord":
        return replace(self, **changes)


@dataclass(frozen=True)
class MappingSet:
    records: tuple[MappingRecord, ...] = ()
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen: dict[tuple, int] = {}
        for i, rec in enumerate(self.records):
            if rec.triple in seen:
                raise SssomError(
                    f"duplicate mapping {' '.join(rec.triple)} (records {seen[rec.triple]} and {i})"
                )
            seen[rec.triple] = i
        for key, value in self.metadata.items():
            if not key or any(c in key + value for c in _FORBIDDEN) or ":" in key:
                raise SssomError(f"invalid metadata entry {key!r}: {value!r}")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def filter(self, predicate_id: str) -> "MappingSet":
        return MappingSet(tuple(r for r in self.records if r.predicate_id == predicate_id), dict(self.metadata))


def canonical_key(record: MappingRecord, source_first: bool = True) -> tuple[str, str]:
    """Comparison key for a record.

    With ``source_first`` the pair keeps its orientation; otherwise it is
    sorted so that subject/object swaps compare equal.
    """
    pair = (record.subject_id, record.object_id)
    if source_first:
        return pair
    return tuple(sorted(pair))  # type: ignore[return-value]


def _format_confidence(value: float) -> str:
    text = f"{value:.4f}".rstrip("0").rstrip(".")
    return text or "0"


def _format_cell(name: str, value) -> str:
    if value is None:
        return ""
    if name == "confidence":
        return _format_confidence(value)
    if name == "similarity_score":
        return repr(float(value))
    return str(value)


def write_sssom(mapping_set: MappingSet) -> str:
    """Serialize ``mapping_set`` in canonical column order."""
    lines = [f"#{key}: {value}" for key, value in mapping_set.metadata.items()]
    lines.append("\t".join(COLUMNS))
    for rec in mapping_set.records:
        lines.append("\t".join(_format_cell(c, getattr(rec, c)) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def _parse_float(cell: str, column: str, rowno: int) -> Optional[float]:
    if cell == "":
        return None
    try:
        value = float(cell)
    except ValueError:
        raise SssomError(f"row {rowno}: {column} {cell!r} is not a number") from None
    if not math.isfinite(value):
        raise SssomError(f"row {rowno}: {column} {cell!r} is not finite")
    return value


def parse_sssom(text: str) -> MappingSet:
    """Parse SSSOM TSV text.

    Row numbers in error messages are 1-based physical line numbers.
    """
    metadata: dict[str, str] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, sep, value = lines[i][1:].partition(":")
        if sep and key.strip():
            metadata[key.strip()] = value.strip()
        i += 1
    if i >= len(lines):
        raise SssomError("missing column header line")

    header = lines[i].split("\t")
    header_lineno = i + 1
    for col in REQUIRED_COLUMNS:
        if col not in header:
            raise SssomError(f"missing required column {col!r}")
    extra = [c for c in header if c not in COLUMNS]
    if extra:
        logger.warning("ignoring unknown columns: %s", ", ".join(extra))
    index = {c: header.index(c) for c in COLUMNS if c in header}

    records: list[MappingRecord] = []
    seen: dict[tuple, int] = {}
    for lineno, line in enumerate(lines[header_lineno:], start=header_lineno + 1):
        if not line.strip():
            continue
        cells = line.split("\t")

        def cell(name: str) -> str:
            j = index.get(name)
            return cells[j] if j is not None and j < len(cells) else ""

        try:
            rec = MappingRecord(
                subject_id=cell("subject_id"),
                predicate_id=cell("predicate_id"),
                object_id=cell("object_id"),
                mapping_justification=cell("mapping_justification"),
                subject_label=cell("subject_label") or None,
                object_label=cell("object_label") or None,
                confidence=_parse_float(cell("confidence"), "confidence", lineno),
                similarity_score=_parse_float(cell("similarity_score"), "similarity_score", lineno),
                comment=cell("comment") or None,
            )
        except SssomError as exc:
            msg = str(exc)
            raise SssomError(msg if msg.startswith("row ") else f"row {lineno}: {msg}") from None
        if rec.triple in seen:
            raise SssomError(
                f"duplicate mapping {' '.join(rec.triple)} on rows {seen[rec.triple]} and {lineno}"
            )
        seen[rec.triple] = lineno
        records.append(rec)
    return MappingSet(tuple(records), metadata)


def load_sssom(path) -> MappingSet:
    with open(path, encoding="utf-8") as fh:
        return parse_sssom(fh.read())
