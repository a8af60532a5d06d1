"""Lexicon-driven scanning of sentence corpora for figurative expressions."""

from figlang.prevalence.normalize import LemmatizerAdapter, RuleLemmatizer, normalize_for_matching
from figlang.prevalence.matcher import ExpressionLexicon, LexiconEntry, Match, Matcher, build_matcher
from figlang.prevalence.scan import (
    PartialScan,
    PrevalenceReport,
    RepoStats,
    merge_partials,
    scan,
    scan_shard,
)

__all__ = [
    "LemmatizerAdapter",
    "RuleLemmatizer",
    "normalize_for_matching",
    "LexiconEntry",
    "ExpressionLexicon",
    "Matcher",
    "Match",
    "build_matcher",
    "scan",
    "scan_shard",
    "merge_partials",
    "PartialScan",
    "RepoStats",
    "PrevalenceReport",
]
