"""High-recall lexical candidate generation.

Two concepts are candidates when any normalized name or synonym of one
equals any normalized name or synonym of the other.
"""

from __future__ import annotations

from collections import defaultdict

from .ontology import Ontology
from .sssom import EXACT_MATCH, LEXICAL_MATCHING, MappingRecord, MappingSet


def normalize_label(s: str) -> str:
    """Case-fold ``s`` and reduce every run of non-alphanumerics to one space.

    >>> normalize_label("Wilms tumor, Type-I ")
    'wilms tumor type i'
    """
    folded = s.casefold()
    chars = [c if c.isalnum() else " " for c in folded]
    return " ".join("".join(chars).split())


def _index(ontology: Ontology) -> dict[str, dict[str, str]]:
    # normalized string -> {concept id: first raw label producing it}
    index: dict[str, dict[str, str]] = defaultdict(dict)
    for concept in ontology:
        for label in concept.labels:
            key = normalize_label(label)
            if key:
                index[key].setdefault(concept.id, label)
    return index


def lexical_match(source: Ontology, target: Ontology) -> MappingSet:
    """Candidate exact matches from ``source`` to ``target``, sorted by pair.

    Matching goes through an inverted index over the target's normalized
    labels. When a pair shares several strings, the lexicographically
    smallest normalized one is reported in the comment.
    """
    target_index = _index(target)
    shared: dict[tuple[str, str], tuple[str, str, str]] = {}
    for concept in source:
        for label in concept.labels:
            key = normalize_label(label)
            if not key:
                continue
            for target_id, target_label in target_index.get(key, {}).items():
                pair = (concept.id, target_id)
                if pair not in shared or key < shared[pair][0]:
                    shared[pair] = (key, label, target_label)

    records = []
    for (subject_id, object_id) in sorted(shared):
        records.append(
            MappingRecord(
                subject_id=subject_id,
                subject_label=source.label_of(subject_id),
                predicate_id=EXACT_MATCH,
                object_id=object_id,
                object_label=target.label_of(object_id),
                mapping_justification=LEXICAL_MATCHING,
                comment="lexical match: {1!r} ~ {2!r}".format(*shared[(subject_id, object_id)]),
            )
        )
    metadata = {"mapping_tool": "mappergpt-lexmatch"}
    if source.source_name:
        metadata["subject_source"] = source.source_name
    if target.source_name:
        metadata["object_source"] = target.source_name
    return MappingSet(tuple(records), metadata)
