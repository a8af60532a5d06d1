"""Aggregate statistics over an annotated dataset."""

from __future__ import annotations

from typing import Iterable

from figlang.figdata.model import AnnotatedSentence, DatasetStats
from figlang.prevalence.normalize import normalize_expression


def dataset_stats(dataset: Iterable[AnnotatedSentence]) -> DatasetStats:
    """Counts over sentences and unique verified expressions.

    Expression uniqueness uses the case-folded, lemmatized surface, so
    spelling variants collapse to one entry. When the same normalized
    surface carries conflicting scopes, the majority scope wins (ties go to
    se_specific).
    """
    items = list(dataset)
    n_rejected = sum(1 for item in items if item.status == "rejected")
    n_metaphor = 0
    n_idiom = 0
    scope_votes: dict[tuple[str, ...], dict[str, int]] = {}
    for item in items:
        verified = item.verified_expressions()
        if any(e.category == "metaphor" for e in verified):
            n_metaphor += 1
        if any(e.category == "idiom" for e in verified):
            n_idiom += 1
        for expr in verified:
            key = normalize_expression(expr.surface)
            if not key:
                continue
            votes = scope_votes.setdefault(key, {"se_specific": 0, "general": 0})
            votes[expr.scope] += 1
    n_se = sum(1 for votes in scope_votes.values() if votes["se_specific"] >= votes["general"])
    return DatasetStats(
        n_sentences=len(items),
        n_metaphor_sentences=n_metaphor,
        n_idiom_sentences=n_idiom,
        n_rejected=n_rejected,
        n_unique_expressions=len(scope_votes),
        n_se_specific=n_se,
        n_general=len(scope_votes) - n_se,
    )
