"""Per-class and micro-averaged precision/recall/F1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

MULTILABEL = "multilabel"
MULTICLASS = "multiclass"


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int


@dataclass(frozen=True)
class MetricsReport:
    per_class: dict[str, ClassMetrics]
    micro_precision: float
    micro_recall: float
    micro_f1: float


def _prf(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    # Harmonic mean in count form: exact where fp == fn (single-label
    # multiclass), where it reduces to plain accuracy.
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn > 0 else 0.0
    return precision, recall, f1


def classification_metrics(
    golds: Sequence,
    preds: Sequence,
    mode: str,
    labels: Sequence[str],
) -> MetricsReport:
    """Compute per-class and micro P/R/F1 over the declared label space.

    ``multiclass`` expects one label per item; ``multilabel`` expects a
    collection of labels per item (empty collections are allowed and
    contribute only false-positive/true-negative mass).
    """
    if len(golds) != len(preds):
        raise ValueError(f"golds/preds length mismatch: {len(golds)} vs {len(preds)}")
    if mode not in (MULTILABEL, MULTICLASS):
        raise ValueError(f"unknown mode: {mode!r}")
    label_set = set(labels)

    def as_set(value, source: str) -> frozenset:
        if mode == MULTICLASS:
            members = {value}
        else:
            if isinstance(value, str):
                raise ValueError(f"multilabel {source} must be a collection, got a string")
            members = set(value)
        unknown = members - label_set
        if unknown:
            raise ValueError(f"unknown label in {source}: {sorted(unknown)!r}")
        return frozenset(members)

    gold_sets = [as_set(g, "golds") for g in golds]
    pred_sets = [as_set(p, "preds") for p in preds]

    per_class: dict[str, ClassMetrics] = {}
    total_tp = total_fp = total_fn = 0
    for label in labels:
        tp = sum(1 for g, p in zip(gold_sets, pred_sets) if label in g and label in p)
        fp = sum(1 for g, p in zip(gold_sets, pred_sets) if label not in g and label in p)
        fn = sum(1 for g, p in zip(gold_sets, pred_sets) if label in g and label not in p)
        precision, recall, f1 = _prf(tp, fp, fn)
        per_class[label] = ClassMetrics(precision, recall, f1, tp, fp, fn)
        total_tp += tp
        total_fp += fp
        total_fn += fn
    micro_p, micro_r, micro_f1 = _prf(total_tp, total_fp, total_fn)
    return MetricsReport(per_class, micro_p, micro_r, micro_f1)
