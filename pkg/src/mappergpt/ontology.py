"""Concept model and a parser for a strict subset of the OBO flat-file format.

Only the tags needed to describe a concept are understood: ``id``, ``name``,
``def``, ``synonym``, ``is_a`` and ``relationship``. Every other tag is
ignored, and stanzas other than ``[Term]`` are skipped entirely.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Optional

logger = logging.getLogger(__name__)

SYNONYM_SCOPES = ("EXACT", "BROAD", "NARROW", "RELATED", "UNSCOPED")

_CURIE_RE = re.compile(r"^[^:\s]+:[^:\s]+$")
_QUOTED_RE = re.compile(r'^"((?:[^"\\]|\\.)*)"\s*(.*)$')
_ESCAPE_RE = re.compile(r"\\(.)")


class OboParseError(ValueError):
    """Raised for input that cannot be turned into a valid ontology."""


def is_curie(value: str) -> bool:
    return bool(_CURIE_RE.match(value))


@dataclass(frozen=True)
class Synonym:
    text: str
    scope: str = "UNSCOPED"

    def __post_init__(self):
        if self.scope not in SYNONYM_SCOPES:
            raise ValueError(f"unknown synonym scope {self.scope!r}")


@dataclass(frozen=True)
class Relationship:
    predicate: str
    target: str


@dataclass(frozen=True)
class Concept:
    """A single ontology term with the properties used to describe it."""

    id: str
    name: str
    definition: Optional[str] = None
    synonyms: tuple[Synonym, ...] = ()
    parents: tuple[str, ...] = ()
    relationships: tuple[Relationship, ...] = ()

    def __post_init__(self):
        if not is_curie(self.id):
            raise ValueError(f"concept id {self.id!r} is not a prefix:local CURIE")
        if not self.name:
            raise ValueError(f"concept {self.id} has an empty name")
        if len(set(self.synonyms)) != len(self.synonyms):
            raise ValueError(f"concept {self.id} has duplicate synonyms")

    @property
    def labels(self) -> list[str]:
        """Name followed by every synonym text, in order."""
        return [self.name] + [s.text for s in self.synonyms]


@dataclass(frozen=True)
class Ontology:
    concepts: dict[str, Concept] = field(default_factory=dict)
    source_name: str = ""
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.concepts)

    def __iter__(self):
        return iter(self.concepts.values())

    def __contains__(self, curie) -> bool:
        return curie in self.concepts

    def get(self, curie: str) -> Optional[Concept]:
        return self.concepts.get(curie)

    def label_of(self, curie: str) -> str:
        """Name of ``curie`` when it resolves here, otherwise the CURIE itself."""
        concept = self.concepts.get(curie)
        return concept.name if concept is not None else curie


def get_concept(ontology: Ontology, curie: str) -> Optional[Concept]:
    """Look up a concept by id; unknown ids give ``None``."""
    return ontology.get(curie)


def _strip_comment(value: str) -> str:
    # trailing "! label" comments and "{qualifier=...}" blocks
    value = value.split(" !", 1)[0]
    if value.startswith("!"):
        return ""
    value = re.sub(r"\s*\{.*\}\s*$", "", value)
    return value.strip()


def _unquote(value: str, lineno: int, tag: str) -> tuple[str, str]:
    m = _QUOTED_RE.match(value)
    if m is None:
        raise OboParseError(f"line {lineno}: {tag} value must be a quoted string")
    return _ESCAPE_RE.sub(r"\1", m.group(1)), m.group(2)


class _Stanza:
    def __init__(self, lineno: int):
        self.lineno = lineno
        self.id: Optional[str] = None
        self.name: Optional[str] = None
        self.definition: Optional[str] = None
        self.synonyms: list[Synonym] = []
        self.parents: list[str] = []
        self.relationships: list[Relationship] = []

    def add(self, tag: str, value: str, lineno: int) -> None:
        if tag == "id":
            self.id = _strip_comment(value)
        elif tag == "name":
            self.name = value.strip()
        elif tag == "def":
            text, _ = _unquote(value, lineno, tag)
            self.definition = text
        elif tag == "synonym":
            text, rest = _unquote(value, lineno, tag)
            words = rest.split()
            scope = words[0] if words and words[0] in SYNONYM_SCOPES[:4] else "UNSCOPED"
            syn = Synonym(text, scope)
            if syn not in self.synonyms:
                self.synonyms.append(syn)
        elif tag == "is_a":
            target = _strip_comment(value)
            if target:
                self.parents.append(target)
        elif tag == "relationship":
            parts = _strip_comment(value).split()
            if len(parts) < 2:
                raise OboParseError(f"line {lineno}: relationship needs a predicate and a target")
            self.relationships.append(Relationship(parts[0], parts[1]))


def parse_obo(text: str, source_name: str = "") -> Ontology:
    """Parse OBO-subset text into an :class:`Ontology`.

    The ``ontology:`` header tag, when present, is used as the source name
    unless one is passed explicitly.

    Raises:
        OboParseError: on a duplicate id, a ``[Term]`` without an id, or a
            malformed quoted value.
    """
    concepts: dict[str, Concept] = {}
    warnings: list[str] = []
    header_name = ""
    stanza: Optional[_Stanza] = None
    in_header = True

    def finish(st: Optional[_Stanza]) -> None:
        if st is None:
            return
        if not st.id:
            raise OboParseError(f"line {st.lineno}: [Term] stanza has no id")
        if not st.name:
            msg = f"line {st.lineno}: term {st.id} has no name; skipped"
            logger.warning(msg)
            warnings.append(msg)
            return
        if st.id in concepts:
            raise OboParseError(f"duplicate term id {st.id} (line {st.lineno})")
        try:
            concepts[st.id] = Concept(
                id=st.id,
                name=st.name,
                definition=st.definition or None,
                synonyms=tuple(st.synonyms),
                parents=tuple(st.parents),
                relationships=tuple(st.relationships),
            )
        except ValueError as exc:
            raise OboParseError(f"line {st.lineno}: {exc}") from exc

    skipping = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("!"):
            continue
        if line.startswith("[") and line.endswith("]"):
            finish(stanza)
            in_header = False
            if line == "[Term]":
                stanza, skipping = _Stanza(lineno), False
            else:
                stanza, skipping = None, True
            continue
        tag, sep, value = line.partition(":")
        if not sep:
            continue
        tag, value = tag.strip(), value.strip()
        if in_header:
            if tag == "ontology":
                header_name = value
            continue
        if skipping or stanza is None:
            continue
        stanza.add(tag, value, lineno)
    finish(stanza)

    return Ontology(concepts=concepts, source_name=source_name or header_name, warnings=tuple(warnings))


def load_obo(path, source_name: str = "") -> Ontology:
    with open(path, encoding="utf-8") as fh:
        return parse_obo(fh.read(), source_name=source_name)
