"""Corpus scanning and prevalence aggregation.

Scanning is shard-parallel: each shard reduces to a ``PartialScan`` whose
merge is associative and commutative, so shard order and boundaries never
change the final report.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Protocol, Sequence

from figlang.prevalence.matcher import Match, Matcher
from figlang.prevalence.normalize import LemmatizerAdapter, normalize_for_matching

logger = logging.getLogger("figlang.prevalence")


class MatchConfirmer(Protocol):
    """Second-opinion detector for a matched expression in context."""

    def confirm(self, sentence_text: str, surface: str) -> bool: ...


class PassThroughConfirmer:
    def confirm(self, sentence_text: str, surface: str) -> bool:
        return True


@dataclass
class PartialScan:
    """Mergeable per-shard counters."""

    sentences_total: int = 0
    matched_se: int = 0
    matched_general: int = 0
    matched_both: int = 0
    per_repo_total: Counter = field(default_factory=Counter)
    per_repo_se: Counter = field(default_factory=Counter)
    per_repo_general: Counter = field(default_factory=Counter)
    frequency: Counter = field(default_factory=Counter)
    confirmer_failures: int = 0

    def merge(self, other: "PartialScan") -> "PartialScan":
        return PartialScan(
            sentences_total=self.sentences_total + other.sentences_total,
            matched_se=self.matched_se + other.matched_se,
            matched_general=self.matched_general + other.matched_general,
            matched_both=self.matched_both + other.matched_both,
            per_repo_total=self.per_repo_total + other.per_repo_total,
            per_repo_se=self.per_repo_se + other.per_repo_se,
            per_repo_general=self.per_repo_general + other.per_repo_general,
            frequency=self.frequency + other.frequency,
            confirmer_failures=self.confirmer_failures + other.confirmer_failures,
        )


@dataclass(frozen=True)
class RepoStats:
    sentences_total: int
    pct_with_se_specific: float
    pct_with_general: float


@dataclass
class PrevalenceReport:
    sentences_total: int
    sentences_matched_se: int
    sentences_matched_general: int
    sentences_matched_both: int
    pct_se: float
    pct_general: float
    pct_both: float
    per_repo: dict[str, RepoStats]
    frequency: dict[str, int]
    low_freq_threshold: int
    low_frequency_share: float
    confirmer_failures: int = 0

    def to_dict(self) -> dict:
        return {
            "sentences_total": self.sentences_total,
            "sentences_matched_se": self.sentences_matched_se,
            "sentences_matched_general": self.sentences_matched_general,
            "sentences_matched_both": self.sentences_matched_both,
            "pct_se": self.pct_se,
            "pct_general": self.pct_general,
            "pct_both": self.pct_both,
            "per_repo": {
                repo: {
                    "sentences_total": st.sentences_total,
                    "pct_with_se_specific": st.pct_with_se_specific,
                    "pct_with_general": st.pct_with_general,
                }
                for repo, st in sorted(self.per_repo.items())
            },
            "frequency": dict(sorted(self.frequency.items())),
            "low_freq_threshold": self.low_freq_threshold,
            "low_frequency_share": self.low_frequency_share,
            "confirmer_failures": self.confirmer_failures,
        }


def _confirmed(
    confirmers: Sequence[MatchConfirmer], text: str, surface: str
) -> tuple[bool, int]:
    """OR over confirmers; a failing confirmer counts as not confirming."""
    if not confirmers:
        return True, 0
    failures = 0
    for confirmer in confirmers:
        try:
            if confirmer.confirm(text, surface):
                return True, failures
        except Exception as exc:  # noqa: BLE001 - adapter boundary
            failures += 1
            logger.warning("confirmer %s failed on %r: %s", type(confirmer).__name__, surface, exc)
    return False, failures


def scan_shard(
    sentences: Iterable[dict],
    matcher: Matcher,
    confirmers: Sequence[MatchConfirmer] = (),
    lemmatizer: Optional[LemmatizerAdapter] = None,
) -> PartialScan:
    """Reduce one shard of sentence records ({repo_slug, text}) to counters."""
    surfaces = {e.expression_id: e.surface for e in matcher.entries}
    partial = PartialScan()
    for record in sentences:
        text = record["text"]
        repo = record.get("repo_slug", "<unknown>")
        partial.sentences_total += 1
        partial.per_repo_total[repo] += 1
        lemmas = normalize_for_matching(text, lemmatizer)
        confirmed: list[Match] = []
        for match in matcher.find_matches(lemmas):
            ok, failures = _confirmed(confirmers, text, surfaces[match.expression_id])
            partial.confirmer_failures += failures
            if ok:
                confirmed.append(match)
                partial.frequency[match.expression_id] += 1
        scopes = {m.scope for m in confirmed}
        if "se_specific" in scopes:
            partial.matched_se += 1
            partial.per_repo_se[repo] += 1
        if "general" in scopes:
            partial.matched_general += 1
            partial.per_repo_general[repo] += 1
        if {"se_specific", "general"} <= scopes:
            partial.matched_both += 1
    return partial


def merge_partials(partials: Iterable[PartialScan]) -> PartialScan:
    merged = PartialScan()
    for partial in partials:
        merged = merged.merge(partial)
    return merged


def finalize(
    partial: PartialScan, matcher: Matcher, low_freq_threshold: int = 10
) -> PrevalenceReport:
    """Build the report from reduced counters.

    ``low_frequency_share`` is the fraction of SE-specific lexicon entries
    with at most ``low_freq_threshold`` confirmed hits (absent entries count
    as zero hits).
    """
    total = partial.sentences_total
    pct = lambda count: 100.0 * count / total if total else 0.0  # noqa: E731
    per_repo = {
        repo: RepoStats(
            sentences_total=partial.per_repo_total[repo],
            pct_with_se_specific=100.0 * partial.per_repo_se[repo] / partial.per_repo_total[repo],
            pct_with_general=100.0 * partial.per_repo_general[repo] / partial.per_repo_total[repo],
        )
        for repo in partial.per_repo_total
    }
    se_entries = [e for e in matcher.entries if e.scope == "se_specific"]
    if se_entries:
        low = sum(1 for e in se_entries if partial.frequency[e.expression_id] <= low_freq_threshold)
        low_share = low / len(se_entries)
    else:
        low_share = 0.0
    return PrevalenceReport(
        sentences_total=total,
        sentences_matched_se=partial.matched_se,
        sentences_matched_general=partial.matched_general,
        sentences_matched_both=partial.matched_both,
        pct_se=pct(partial.matched_se),
        pct_general=pct(partial.matched_general),
        pct_both=pct(partial.matched_both),
        per_repo=per_repo,
        frequency={e.expression_id: partial.frequency[e.expression_id] for e in matcher.entries},
        low_freq_threshold=low_freq_threshold,
        low_frequency_share=low_share,
        confirmer_failures=partial.confirmer_failures,
    )


def scan(
    corpus: Iterable[dict],
    matcher: Matcher,
    confirmers: Sequence[MatchConfirmer] = (),
    low_freq_threshold: int = 10,
    lemmatizer: Optional[LemmatizerAdapter] = None,
) -> PrevalenceReport:
    """Single-shard convenience wrapper: scan, then finalize."""
    partial = scan_shard(corpus, matcher, confirmers, lemmatizer)
    return finalize(partial, matcher, low_freq_threshold)


def report_to_csv(report: PrevalenceReport, out_dir: str | Path) -> None:
    """Write the aggregate, per-repo, and frequency tables as CSV files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "prevalence_overall.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            ["sentences_total", "matched_se", "matched_general", "matched_both",
             "pct_se", "pct_general", "pct_both", "low_freq_threshold", "low_frequency_share"]
        )
        writer.writerow(
            [report.sentences_total, report.sentences_matched_se, report.sentences_matched_general,
             report.sentences_matched_both, report.pct_se, report.pct_general, report.pct_both,
             report.low_freq_threshold, report.low_frequency_share]
        )
    with open(out / "prevalence_per_repo.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["repo_slug", "sentences_total", "pct_with_se_specific", "pct_with_general"])
        for repo, st in sorted(report.per_repo.items()):
            writer.writerow([repo, st.sentences_total, st.pct_with_se_specific, st.pct_with_general])
    with open(out / "prevalence_frequency.csv", "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["expression_id", "count"])
        for expression_id, count in sorted(report.frequency.items()):
            writer.writerow([expression_id, count])


def write_chart_data(report: PrevalenceReport, out_dir: str | Path) -> None:
    """Emit plot-ready data: per-repo percentage series and the SE-specific
    frequency histogram with the low-frequency threshold marker."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    repo_series = {
        "x": sorted(report.per_repo),
        "series": {
            "se_specific": [report.per_repo[r].pct_with_se_specific for r in sorted(report.per_repo)],
            "general": [report.per_repo[r].pct_with_general for r in sorted(report.per_repo)],
        },
        "y_label": "percent of sentences",
    }
    (out / "repo_percentages.json").write_text(
        json.dumps(repo_series, indent=2, sort_keys=True), encoding="utf-8"
    )
    histogram = {
        "counts": dict(sorted(report.frequency.items())),
        "threshold": report.low_freq_threshold,
        "low_frequency_share": report.low_frequency_share,
    }
    (out / "frequency_histogram.json").write_text(
        json.dumps(histogram, indent=2, sort_keys=True), encoding="utf-8"
    )
