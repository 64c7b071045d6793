"""Answer vocabularies of the review prompt and their SSSOM translation."""

from __future__ import annotations

from enum import Enum

from .sssom import BROAD_MATCH, DIFFERENT_FROM, EXACT_MATCH, NARROW_MATCH, RELATED_MATCH


class Category(str, Enum):
    EXACT_MATCH = "EXACT_MATCH"
    BROADER_THAN = "BROADER_THAN"
    NARROWER_THAN = "NARROWER_THAN"
    RELATED_TO = "RELATED_TO"
    DIFFERENT = "DIFFERENT"


class Confidence(str, Enum):
    LOW = "LOW"
    MEDIUM = "MEDIUM"
    HIGH = "HIGH"


# A is the subject. "A is broader than B" means B is a narrower match of A.
_PREDICATES = {
    Category.EXACT_MATCH: EXACT_MATCH,
    Category.BROADER_THAN: NARROW_MATCH,
    Category.NARROWER_THAN: BROAD_MATCH,
    Category.RELATED_TO: RELATED_MATCH,
    Category.DIFFERENT: DIFFERENT_FROM,
}

CONFIDENCE_SCORES = {
    Confidence.HIGH: 0.9,
    Confidence.MEDIUM: 0.6,
    Confidence.LOW: 0.3,
}


def category_to_predicate(category: Category) -> str:
    return _PREDICATES[Category(category)]
