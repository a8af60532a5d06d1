"""Text and CSV rendering of comparison reports (per-class columns,
micro average, improvement rows)."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional

from figlang.bench.comparison import ComparisonReport, improvement_pct


def format_improvement(value: Optional[float]) -> str:
    """Two-decimal signed percent; '-' marks an undefined (base=0) cell."""
    if value is None:
        return "-"
    return f"{value:+.2f}%"


def render_comparison_table(report: ComparisonReport, model_name: Optional[str] = None) -> str:
    name = model_name or report.metadata.get("encoder", "model")
    header = ["Model", *report.label_space, "Micro Avg."]
    rows = []
    base_cells = [name]
    fl_cells = [f"{name}-FL"]
    diff_cells = ["+/-"]
    for label in report.label_space:
        base_f1 = report.baseline.metrics.per_class[label].f1
        fl_f1 = report.fl.metrics.per_class[label].f1
        base_cells.append(f"{base_f1:.3f}")
        fl_cells.append(f"{fl_f1:.3f}")
        diff_cells.append(format_improvement(improvement_pct(base_f1, fl_f1)))
    base_cells.append(f"{report.baseline.metrics.micro_f1:.3f}")
    fl_cells.append(f"{report.fl.metrics.micro_f1:.3f}")
    diff_cells.append(format_improvement(report.improvement()))
    rows.extend([base_cells, fl_cells, diff_cells])

    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for row in rows:
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def render_score_rows(
    model_name: str,
    label_space: tuple[str, ...],
    base_scores: dict[str, float],
    fl_scores: dict[str, float],
    base_micro: float,
    fl_micro: float,
) -> str:
    """Same table layout from precomputed F1 values (for echoing published rows)."""
    header = ["Model", *label_space, "Micro Avg."]
    base_cells = [model_name] + [f"{base_scores[l]:.3f}" for l in label_space] + [f"{base_micro:.3f}"]
    fl_cells = [f"{model_name}-FL"] + [f"{fl_scores[l]:.3f}" for l in label_space] + [f"{fl_micro:.3f}"]
    diff_cells = ["+/-"]
    for label in label_space:
        diff_cells.append(format_improvement(improvement_pct(base_scores[label], fl_scores[label])))
    diff_cells.append(format_improvement(improvement_pct(base_micro, fl_micro)))
    rows = [base_cells, fl_cells, diff_cells]
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) for i in range(len(header))]
    lines = [" | ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines.append("-+-".join("-" * w for w in widths))
    for row in rows:
        lines.append(" | ".join(c.ljust(w) for c, w in zip(row, widths)))
    return "\n".join(lines) + "\n"


def comparison_to_csv(report: ComparisonReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["variant", *report.label_space, "micro_f1"])
        writer.writerow(
            ["baseline"]
            + [repr(report.baseline.metrics.per_class[l].f1) for l in report.label_space]
            + [repr(report.baseline.metrics.micro_f1)]
        )
        writer.writerow(
            ["fl"]
            + [repr(report.fl.metrics.per_class[l].f1) for l in report.label_space]
            + [repr(report.fl.metrics.micro_f1)]
        )
        writer.writerow(
            ["improvement"]
            + [format_improvement(report.improvement(l)) for l in report.label_space]
            + [format_improvement(report.improvement())]
        )
