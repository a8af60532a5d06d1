"""Entailment-by-similarity evaluation: does the encoder place the original
sentence closer to its equivalent-meaning rephrasing than to the
different-meaning one?

For each item the original, EMS, and DMS are preprocessed, encoded,
mean-pooled, normalized jointly over the whole evaluation batch, and
compared by cosine. Wins are strict inequalities (ties count as non-wins).
Per-category one-tailed Wilcoxon tests get a Benjamini-Hochberg correction
across the report's test family, and |Cliff's delta| is attached.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from figlang.figdata.model import AnnotatedSentence
from figlang.geom.encoders import EncoderAdapter, EncoderError
from figlang.geom.pooling import cosine_similarity, mean_pool
from figlang.geom.svt import SvtConfig, svt_normalize
from figlang.ingest.sentences import preprocess_se_text
from figlang.stats import PairedSample, benjamini_hochberg, cliffs_delta, wilcoxon_signed_rank_one_tailed

logger = logging.getLogger("figlang.geom")

CATEGORIES = ("se_specific", "general", "overall")


@dataclass(frozen=True)
class SimilarityComparison:
    """Similarity of one original sentence to its EMS and its DMS."""

    item_id: str
    sim_ems: float
    sim_dms: float
    category: str  # se_specific | general | both


@dataclass(frozen=True)
class CategoryResult:
    percent_ems_wins: float
    p_value: float
    p_adjusted: float
    reject: bool
    cliffs_delta_abs: float
    magnitude: str
    n: int


@dataclass
class RQ1Report:
    encoder_name: str
    svt: SvtConfig
    categories: dict[str, CategoryResult]
    n_items: int
    n_excluded: int
    excluded_ids: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    fdr_q: float = 0.05


def _category_of(item: AnnotatedSentence) -> str:
    scope = item.scope_category()
    if scope is None:
        # Screened-only fixtures carry unverified spans; fall back to them.
        scopes = {e.scope for e in item.expressions}
        if scopes == {"se_specific"}:
            return "se_specific"
        if not scopes or scopes == {"general"}:
            return "general"
        return "both"
    return scope


def evaluate_rq1(
    dataset: Sequence[AnnotatedSentence],
    encoder: EncoderAdapter,
    cfg: Optional[SvtConfig] = None,
    fdr_q: float = 0.05,
) -> tuple[RQ1Report, list[SimilarityComparison]]:
    """Score every (original, EMS, DMS) item and aggregate per category.

    Items missing texts or failing the encoder are excluded and listed in
    the report. Normalization statistics come from the full batch of pooled
    vectors (all three roles jointly).
    """
    cfg = cfg or SvtConfig()
    eligible: list[AnnotatedSentence] = []
    excluded: list[str] = []
    for item in dataset:
        if item.ems and item.dms:
            eligible.append(item)
        else:
            excluded.append(item.id)
    texts: list[str] = []
    for item in eligible:
        texts.extend(
            preprocess_se_text(t) for t in (item.original, item.ems or "", item.dms or "")
        )

    kept_items: list[AnnotatedSentence] = []
    rows: list[np.ndarray] = []
    try:
        embedded = encoder.encode(texts)
        kept_items = list(eligible)
        rows = [mean_pool(te).vector for te in embedded]
    except (EncoderError, ValueError):
        # Batch failed; probe items individually, then re-encode the
        # survivors together so batch-fitted encoders stay dimension-consistent.
        surviving_texts: list[str] = []
        for idx, item in enumerate(eligible):
            base = 3 * idx
            item_texts = texts[base : base + 3]
            try:
                encoder.encode(item_texts)
            except (EncoderError, ValueError) as exc:
                logger.warning("encoder failed on item %s: %s", item.id, exc)
                excluded.append(item.id)
                continue
            kept_items.append(item)
            surviving_texts.extend(item_texts)
        if kept_items:
            rows = [mean_pool(te).vector for te in encoder.encode(surviving_texts)]

    comparisons: list[SimilarityComparison] = []
    notes: list[str] = []
    if kept_items:
        matrix = svt_normalize(np.vstack(rows), cfg)
        for i, item in enumerate(kept_items):
            orig, ems, dms = matrix[3 * i], matrix[3 * i + 1], matrix[3 * i + 2]
            try:
                sim_ems = cosine_similarity(orig, ems)
                sim_dms = cosine_similarity(orig, dms)
            except ValueError as exc:
                logger.warning("similarity failed on item %s: %s", item.id, exc)
                excluded.append(item.id)
                continue
            comparisons.append(SimilarityComparison(item.id, sim_ems, sim_dms, _category_of(item)))

    results: dict[str, tuple[float, Optional[float], float, str, int]] = {}
    for category in CATEGORIES:
        if category == "overall":
            subset = comparisons
        else:
            subset = [c for c in comparisons if c.category == category]
        n = len(subset)
        if n == 0:
            results[category] = (float("nan"), None, float("nan"), "negligible", 0)
            continue
        wins = sum(1 for c in subset if c.sim_ems > c.sim_dms)
        percent = 100.0 * wins / n
        sims_e = [c.sim_ems for c in subset]
        sims_d = [c.sim_dms for c in subset]
        try:
            p_value: Optional[float] = wilcoxon_signed_rank_one_tailed(PairedSample.of(sims_e, sims_d))
        except ValueError:
            p_value = None
            notes.append(f"wilcoxon undefined for category {category} (all differences zero)")
        effect = cliffs_delta(sims_e, sims_d)
        results[category] = (percent, p_value, abs(effect.delta), effect.magnitude, n)

    defined = [(cat, res[1]) for cat, res in results.items() if res[1] is not None]
    adjusted = benjamini_hochberg([p for _, p in defined], fdr_q) if defined else []
    adj_map = {cat: adj for (cat, _), adj in zip(defined, adjusted)}

    categories: dict[str, CategoryResult] = {}
    for category, (percent, p_value, delta_abs, magnitude, n) in results.items():
        adj_p, reject = adj_map.get(category, (float("nan"), False))
        categories[category] = CategoryResult(
            percent_ems_wins=percent,
            p_value=float("nan") if p_value is None else p_value,
            p_adjusted=adj_p,
            reject=reject,
            cliffs_delta_abs=delta_abs,
            magnitude=magnitude,
            n=n,
        )

    report = RQ1Report(
        encoder_name=getattr(encoder, "name", encoder.__class__.__name__),
        svt=cfg,
        categories=categories,
        n_items=len(comparisons),
        n_excluded=len(set(excluded)),
        excluded_ids=sorted(set(excluded)),
        notes=notes,
    )
    return report, comparisons


def comparisons_to_csv(comparisons: Sequence[SimilarityComparison], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["item_id", "category", "sim_ems", "sim_dms"])
        for c in comparisons:
            writer.writerow([c.item_id, c.category, repr(c.sim_ems), repr(c.sim_dms)])


def report_to_csv(report: RQ1Report, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["encoder", "category", "n", "percent_ems_wins", "p_value", "p_adjusted", "reject",
             "cliffs_delta_abs", "magnitude", "svt_alpha", "svt_applied"]
        )
        for category, res in report.categories.items():
            writer.writerow(
                [
                    report.encoder_name,
                    category,
                    res.n,
                    f"{res.percent_ems_wins:.4f}" if not math.isnan(res.percent_ems_wins) else "",
                    repr(res.p_value),
                    repr(res.p_adjusted),
                    res.reject,
                    f"{res.cliffs_delta_abs:.6f}" if not math.isnan(res.cliffs_delta_abs) else "",
                    res.magnitude,
                    report.svt.alpha,
                    report.svt.apply,
                ]
            )


def _fmt_p(p: float) -> str:
    if math.isnan(p):
        return "n/a"
    if p < 0.01:
        return "p < 0.01"
    return f"p = {p:.3f}"


def render_rq1_table(rows: dict[str, dict[str, dict]]) -> str:
    """Text table over precomputed rows: model -> category -> stats dict.

    Each per-category dict provides percent, p_value, and delta_abs; the
    layout mirrors the three category blocks of the similarity report.
    """
    header = ["Model"]
    for category in ("SE-specific", "General", "Overall"):
        header.extend([f"{category} EMS>DMS", "p-value", "|delta|"])
    lines = [" | ".join(header)]
    lines.append("-" * len(lines[0]))
    for model, cats in rows.items():
        cells = [model]
        for category in CATEGORIES:
            stats = cats.get(category, {})
            percent = stats.get("percent")
            cells.append("" if percent is None else f"{percent:.2f}%")
            cells.append(_fmt_p(stats.get("p_value", float("nan"))))
            delta = stats.get("delta_abs")
            cells.append("" if delta is None else f"{delta:.3f}")
        lines.append(" | ".join(cells))
    return "\n".join(lines) + "\n"


def report_table_rows(report: RQ1Report) -> dict[str, dict[str, dict]]:
    """Adapt a report to the renderer's row structure."""
    cats = {}
    for category, res in report.categories.items():
        cats[category] = {
            "percent": None if math.isnan(res.percent_ems_wins) else res.percent_ems_wins,
            "p_value": res.p_adjusted if not math.isnan(res.p_adjusted) else res.p_value,
            "delta_abs": None if math.isnan(res.cliffs_delta_abs) else res.cliffs_delta_abs,
        }
    return {report.encoder_name: cats}
