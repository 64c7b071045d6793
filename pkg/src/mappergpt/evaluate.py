"""Scoring predicted mappings against gold standards."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import asdict, dataclass
from fractions import Fraction

from .sssom import EXACT_MATCH, MANUAL_CURATION, MappingRecord, MappingSet, canonical_key

logger = logging.getLogger(__name__)

CURVE_COLUMNS = ("threshold", "tp", "fp", "fn", "precision", "recall", "f1")


class EvaluationError(ValueError):
    pass


def f1_score(p: float, r: float) -> float:
    """Harmonic mean of precision and recall (0 when both are 0)."""
    for name, value in (("precision", p), ("recall", r)):
        if not 0.0 <= value <= 1.0:
            raise EvaluationError(f"{name} {value} outside [0, 1]")
    if p + r == 0:
        return 0.0
    return 2 * p * r / (p + r)


@dataclass(frozen=True)
class EvalReport:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int) -> "EvalReport":
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        return cls(tp, fp, fn, p, r, f1_score(p, r))

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def exact_f1(self) -> Fraction:
        """F1 as an exact fraction of counts, for tie comparisons."""
        denom = 2 * self.true_positives + self.false_positives + self.false_negatives
        return Fraction(2 * self.true_positives, denom) if denom else Fraction(0)


def _pairs(mappings: MappingSet, exact_only: bool, undirected: bool) -> set[tuple[str, str]]:
    records = (r for r in mappings if not exact_only or r.predicate_id == EXACT_MATCH)
    return {canonical_key(r, source_first=not undirected) for r in records}


def compare(predicted: MappingSet, gold: MappingSet, exact_only: bool = True, undirected: bool = False) -> EvalReport:
    """Count predicted pairs against gold pairs.

    Pairs are directed (subject, object) unless ``undirected`` is set.

    Raises:
        EvaluationError: if the gold set is empty after filtering.
    """
    gold_pairs = _pairs(gold, exact_only, undirected)
    if not gold_pairs:
        raise EvaluationError("gold standard is empty")
    pred_pairs = _pairs(predicted, exact_only, undirected)
    tp = len(pred_pairs & gold_pairs)
    return EvalReport.from_counts(tp, len(pred_pairs) - tp, len(gold_pairs) - tp)


@dataclass(frozen=True)
class ThresholdCurve:
    points: tuple[tuple[float, EvalReport], ...]
    best_threshold: float
    best_f1: float

    @property
    def thresholds(self) -> list[float]:
        return [t for t, _ in self.points]


def threshold_scan(scored: MappingSet, gold: MappingSet) -> ThresholdCurve:
    """Evaluate ``score >= t`` for every distinct score ``t`` in ``scored``.

    The best threshold is the smallest one reaching the maximal F1. F1
    values are compared as exact fractions so that plateaus tie exactly.
    """
    for i, rec in enumerate(scored.records, start=1):
        if rec.similarity_score is None:
            raise EvaluationError(
                f"record {i} ({rec.subject_id} -> {rec.object_id}) has no similarity_score"
            )
    if not scored.records:
        raise EvaluationError("scored mapping set is empty")

    thresholds = sorted({rec.similarity_score for rec in scored.records})
    points = []
    for t in thresholds:
        kept = MappingSet(tuple(r for r in scored.records if r.similarity_score >= t))
        points.append((t, compare(kept, gold, exact_only=True)))

    best_t, best = points[0]
    for t, report in points[1:]:
        if report.exact_f1 > best.exact_f1:
            best_t, best = t, report
    return ThresholdCurve(tuple(points), best_t, best.f1)


def format_curve_csv(curve: ThresholdCurve) -> str:
    lines = [",".join(CURVE_COLUMNS)]
    for t, rep in curve.points:
        lines.append(
            f"{t:.6f},{rep.true_positives},{rep.false_positives},{rep.false_negatives},"
            f"{rep.precision:.6f},{rep.recall:.6f},{rep.f1:.6f}"
        )
    return "\n".join(lines) + "\n"


_REPORT_KEYS = ("true_positives", "false_positives", "false_negatives", "precision", "recall", "f1")


def _report_value(key: str, value) -> str:
    return str(value) if isinstance(value, int) else f"{value:.6f}"


def format_report(report: EvalReport, fmt: str = "text") -> str:
    """Render a report as ``key: value`` lines (``text``) or a one-row ``tsv``."""
    d = report.as_dict()
    if fmt == "text":
        return "".join(f"{k}: {_report_value(k, d[k])}\n" for k in _REPORT_KEYS)
    if fmt == "tsv":
        return "\t".join(_REPORT_KEYS) + "\n" + "\t".join(_report_value(k, d[k]) for k in _REPORT_KEYS) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def bridge_testset(left_to_bridge: MappingSet, right_to_bridge: MappingSet) -> MappingSet:
    """Join two mapping sets on their shared bridge-ontology objects.

    ``a -> u`` in the left set and ``b -> u`` in the right set give a gold
    ``a exactMatch b``. Only exact matches take part.
    """
    right_by_bridge: dict[str, list[str]] = defaultdict(list)
    for rec in right_to_bridge:
        if rec.predicate_id == EXACT_MATCH:
            right_by_bridge[rec.object_id].append(rec.subject_id)

    pairs = set()
    for rec in left_to_bridge:
        if rec.predicate_id != EXACT_MATCH:
            continue
        for b in right_by_bridge.get(rec.object_id, ()):
            pairs.add((rec.subject_id, rec.object_id, b))

    if left_to_bridge.records and right_to_bridge.records and not pairs:
        logger.warning("no shared bridge ids between the two mapping sets")

    labels = {r.subject_id: r.subject_label for r in (*left_to_bridge, *right_to_bridge) if r.subject_label}
    gold: dict[tuple[str, str], str] = {}
    for a, u, b in sorted(pairs):
        gold.setdefault((a, b), u)
    records = tuple(
        MappingRecord(
            subject_id=a,
            subject_label=labels.get(a),
            predicate_id=EXACT_MATCH,
            object_id=b,
            object_label=labels.get(b),
            mapping_justification=MANUAL_CURATION,
            comment=f"bridged via {u}",
        )
        for (a, b), u in sorted(gold.items())
    )
    return MappingSet(records, {"mapping_tool": "mappergpt-make-testset"})
