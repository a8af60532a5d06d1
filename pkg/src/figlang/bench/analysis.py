"""Qualitative error analysis: items one variant gets right and the other wrong."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence


@dataclass
class ErrorAnalysis:
    fl_only_correct: list[str]
    baseline_only_correct: list[str]

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.fl_only_correct), len(self.baseline_only_correct)


def _correct(gold, pred, multilabel: bool) -> bool:
    if multilabel:
        return frozenset(gold) == frozenset(pred)
    return gold == pred


def error_analysis(
    golds: Sequence,
    base_preds: Sequence,
    fl_preds: Sequence,
    multilabel: bool = False,
    ids: Optional[Sequence[str]] = None,
) -> ErrorAnalysis:
    """Disjoint id lists of FL-only and baseline-only correct items."""
    if len(golds) != len(base_preds) or len(golds) != len(fl_preds):
        raise ValueError(
            f"misaligned prediction lists: {len(golds)} golds, "
            f"{len(base_preds)} baseline, {len(fl_preds)} fl"
        )
    if ids is None:
        ids = [str(i) for i in range(len(golds))]
    fl_only = []
    base_only = []
    for item_id, gold, base, fl in zip(ids, golds, base_preds, fl_preds):
        base_ok = _correct(gold, base, multilabel)
        fl_ok = _correct(gold, fl, multilabel)
        if fl_ok and not base_ok:
            fl_only.append(item_id)
        elif base_ok and not fl_ok:
            base_only.append(item_id)
    return ErrorAnalysis(fl_only_correct=fl_only, baseline_only_correct=base_only)


def render_error_summary(analysis: ErrorAnalysis) -> str:
    fl_count, base_count = analysis.counts
    return (
        f"FL-only correct: {fl_count} items; baseline-only correct: {base_count} items\n"
    )


def export_error_analysis(
    analysis: ErrorAnalysis,
    path: str | Path,
    texts_by_id: Optional[dict[str, str]] = None,
    base_preds_by_id: Optional[dict] = None,
    fl_preds_by_id: Optional[dict] = None,
) -> None:
    """JSONL export with texts and both predictions for qualitative review."""
    with open(path, "w", encoding="utf-8") as handle:
        for group, id_list in (
            ("fl_only_correct", analysis.fl_only_correct),
            ("baseline_only_correct", analysis.baseline_only_correct),
        ):
            for item_id in id_list:
                record = {"group": group, "item_id": item_id}
                if texts_by_id is not None:
                    record["text"] = texts_by_id.get(item_id, "")
                if base_preds_by_id is not None:
                    record["baseline_prediction"] = base_preds_by_id.get(item_id)
                if fl_preds_by_id is not None:
                    record["fl_prediction"] = fl_preds_by_id.get(item_id)
                handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False))
                handle.write("\n")
