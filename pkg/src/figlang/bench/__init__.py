"""Downstream task benchmarks: loaders, baseline-vs-FL comparison, error analysis."""

from figlang.bench.datasets import (
    EMOTION_LABELS,
    INCIVILITY_LABELS,
    PRIORITY_LABELS,
    DatasetError,
    TaskDataset,
    TaskItem,
    load_emotion_dataset,
    load_incivility_dataset,
    load_priority_dataset,
)
from figlang.bench.comparison import ComparisonReport, TaskRunConfig, improvement_pct, run_comparison
from figlang.bench.analysis import ErrorAnalysis, error_analysis, render_error_summary
from figlang.bench.render import format_improvement, render_comparison_table

__all__ = [
    "EMOTION_LABELS",
    "INCIVILITY_LABELS",
    "PRIORITY_LABELS",
    "DatasetError",
    "TaskItem",
    "TaskDataset",
    "load_emotion_dataset",
    "load_incivility_dataset",
    "load_priority_dataset",
    "TaskRunConfig",
    "ComparisonReport",
    "run_comparison",
    "improvement_pct",
    "format_improvement",
    "render_comparison_table",
    "ErrorAnalysis",
    "error_analysis",
    "render_error_summary",
]
