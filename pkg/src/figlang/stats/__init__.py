"""Nonparametric statistics, splitting, and classification metrics."""

from figlang.stats.nonparametric import (
    EffectSize,
    PairedSample,
    benjamini_hochberg,
    cliffs_delta,
    wilcoxon_signed_rank_one_tailed,
)
from figlang.stats.partition import stratified_split
from figlang.stats.metrics import ClassMetrics, MetricsReport, classification_metrics

__all__ = [
    "PairedSample",
    "EffectSize",
    "wilcoxon_signed_rank_one_tailed",
    "benjamini_hochberg",
    "cliffs_delta",
    "stratified_split",
    "ClassMetrics",
    "MetricsReport",
    "classification_metrics",
]
