"""Normalization, multi-pattern matching, and corpus scanning."""

from __future__ import annotations

import random

import pytest

from figlang.prevalence import (
    ExpressionLexicon,
    LexiconEntry,
    build_matcher,
    merge_partials,
    normalize_for_matching,
    scan,
    scan_shard,
)
from figlang.prevalence.scan import PassThroughConfirmer, finalize


def _lexicon(rows):
    return ExpressionLexicon.from_surfaces(rows)


# -------------------------------------------------------------- normalization

def test_normalize_lemma_example():
    assert normalize_for_matching("Root-causes found!") == ["root", "cause", "find"]


def test_normalize_empty():
    assert normalize_for_matching("") == []
    assert normalize_for_matching("123 !!! 456") == []


def test_normalize_variants_identical():
    assert normalize_for_matching("root cause") == normalize_for_matching("root causes")
    assert normalize_for_matching("root cause") == normalize_for_matching("root-cause")


def test_normalize_drops_digits_and_punct():
    assert normalize_for_matching("fix2 the (bugs)!") == ["fix", "the", "bug"]


# ------------------------------------------------------------------- matching

def test_match_simple():
    matcher = build_matcher(_lexicon([("e1", "nasty bug", "se_specific")]))
    matches = matcher.find_matches(normalize_for_matching("a nasty bug appeared"))
    assert len(matches) == 1 and matches[0].expression_id == "e1"


def test_match_requires_contiguity():
    matcher = build_matcher(_lexicon([("e1", "edge case", "se_specific")]))
    assert matcher.find_matches(normalize_for_matching("the edge of the case")) == []


def test_match_longest_wins_on_nesting():
    matcher = build_matcher(
        _lexicon([
            ("short", "root cause", "se_specific"),
            ("long", "root cause analysis", "se_specific"),
        ])
    )
    matches = matcher.find_matches(normalize_for_matching("we ran root cause analysis today"))
    assert [m.expression_id for m in matches] == ["long"]
    # The short pattern still matches alone.
    alone = matcher.find_matches(normalize_for_matching("the root cause was cold"))
    assert [m.expression_id for m in alone] == ["short"]


def test_match_overlapping_distinct_patterns_both_reported():
    matcher = build_matcher(
        _lexicon([("a", "big red", "general"), ("b", "red flag", "general")])
    )
    matches = matcher.find_matches(normalize_for_matching("a big red flag"))
    assert {m.expression_id for m in matches} == {"a", "b"}


def test_duplicate_lemma_sequences_collapsed():
    lexicon = _lexicon([
        ("e1", "root cause", "se_specific"),
        ("e2", "root causes", "se_specific"),  # same lemmas
    ])
    matcher = build_matcher(lexicon)
    assert len(matcher.entries) == 1


def test_planted_occurrences_oracle():
    rng = random.Random(4)
    # Letter-only suffixes: normalization drops digits, and these letters
    # trigger none of the inflection-stripping rules.
    letters = "bcdfghjklm"
    suffixes = [a + b for a in letters for b in letters]
    surfaces = [f"magic{suffixes[i]} stone{suffixes[i]}" for i in range(100)]
    lexicon = _lexicon([(f"id{i}", s, "general") for i, s in enumerate(surfaces)])
    matcher = build_matcher(lexicon)
    planted: list[tuple[int, str]] = []
    sentences = []
    for i in range(300):
        if rng.random() < 0.4:
            which = rng.randrange(100)
            planted.append((i, f"id{which}"))
            sentences.append(f"filler words then {surfaces[which]} and more filler")
        else:
            sentences.append("nothing to see in this sentence")
    found = []
    for i, text in enumerate(sentences):
        for match in matcher.find_matches(normalize_for_matching(text)):
            found.append((i, match.expression_id))
    assert sorted(found) == sorted(planted)


def test_empty_lexicon_rejected():
    with pytest.raises(ValueError):
        build_matcher(ExpressionLexicon(entries=[]))
    with pytest.raises(ValueError):
        LexiconEntry("x", "", (), "general")


def test_lexicon_csv_roundtrip(tmp_path):
    path = tmp_path / "lex.csv"
    path.write_text(
        "expression_id,surface,scope\ne1,nasty bug,se_specific\ne2,uphill battle,general\n",
        encoding="utf-8",
    )
    lexicon = ExpressionLexicon.from_csv(path)
    assert len(lexicon.entries) == 2
    assert lexicon.entries[0].lemma_sequence == ("nasty", "bug")


# ------------------------------------------------------------------- scanning

def _planted_corpus():
    """1000 sentences: 90 SE-matched, 220 general-matched, 27 with both."""
    corpus = []
    for i in range(1000):
        repo = f"repo{i % 10}"
        if i < 63:
            text = "the nasty bug struck the deploy again"
        elif i < 63 + 193:
            text = "it was an uphill battle all week long"
        elif i < 63 + 193 + 27:
            text = "a nasty bug made this an uphill battle"
        else:
            text = "nothing figurative happened in this sentence"
        corpus.append({"repo_slug": repo, "text": text})
    return corpus


def _planted_matcher():
    return build_matcher(
        _lexicon([
            ("se1", "nasty bug", "se_specific"),
            ("g1", "uphill battle", "general"),
            ("g2", "golden path", "general"),
        ])
    )


def test_scan_empty_corpus_all_zero():
    report = scan([], _planted_matcher())
    assert report.sentences_total == 0
    assert report.pct_se == report.pct_general == report.pct_both == 0.0


def test_scan_planted_percentages_exact():
    report = scan(_planted_corpus(), _planted_matcher(), [PassThroughConfirmer()])
    assert report.pct_se == 9.0
    assert report.pct_general == 22.0
    assert report.pct_both == 2.7
    assert report.sentences_matched_se == 90
    assert report.sentences_matched_general == 220
    assert report.frequency["g2"] == 0


def test_scan_shard_invariance():
    corpus = _planted_corpus()
    matcher = _planted_matcher()
    base = scan(corpus, matcher)
    rng = random.Random(0)
    for _ in range(10):
        shuffled = corpus[:]
        rng.shuffle(shuffled)
        n_shards = rng.randint(1, 7)
        bounds = sorted(rng.sample(range(1, len(shuffled)), n_shards - 1)) if n_shards > 1 else []
        shards = []
        prev = 0
        for b in bounds + [len(shuffled)]:
            shards.append(shuffled[prev:b])
            prev = b
        partial = merge_partials(scan_shard(s, matcher) for s in shards)
        report = finalize(partial, matcher, 10)
        assert report.to_dict() == base.to_dict()


def test_scan_confirmer_rejection_reduces_counts():
    class RejectGeneral:
        def confirm(self, sentence_text, surface):
            return "uphill" not in surface

    full = scan(_planted_corpus(), _planted_matcher())
    filtered = scan(_planted_corpus(), _planted_matcher(), [RejectGeneral()])
    assert filtered.sentences_matched_general == 0
    assert filtered.sentences_matched_se == full.sentences_matched_se
    # Disabling confirmers never decreases counts.
    assert full.sentences_matched_general >= filtered.sentences_matched_general


def test_scan_confirmer_failure_counts_as_unconfirmed():
    class Broken:
        def confirm(self, sentence_text, surface):
            raise RuntimeError("detector offline")

    report = scan(_planted_corpus(), _planted_matcher(), [Broken()])
    assert report.sentences_matched_se == 0
    assert report.confirmer_failures > 0


def test_low_frequency_share():
    corpus = [{"repo_slug": "r", "text": "the nasty bug appeared"} for _ in range(12)]
    matcher = build_matcher(
        _lexicon([
            ("se1", "nasty bug", "se_specific"),
            ("se2", "ghost build", "se_specific"),
        ])
    )
    report = scan(corpus, matcher, low_freq_threshold=10)
    # se1 has 12 hits (> 10), se2 has 0 (<= 10): half the entries are low-frequency.
    assert report.low_frequency_share == 0.5


def test_per_repo_percentages():
    corpus = [
        {"repo_slug": "a", "text": "the nasty bug appeared"},
        {"repo_slug": "a", "text": "all quiet on this front today"},
        {"repo_slug": "b", "text": "an uphill battle for sure"},
    ]
    report = scan(corpus, _planted_matcher())
    assert report.per_repo["a"].sentences_total == 2
    assert report.per_repo["a"].pct_with_se_specific == 50.0
    assert report.per_repo["b"].pct_with_general == 100.0
    assert report.pct_both <= min(report.pct_se, report.pct_general) + 1e-12


def test_matches_recheck_contiguous():
    matcher = _planted_matcher()
    for record in _planted_corpus()[::37]:
        lemmas = normalize_for_matching(record["text"])
        for match in matcher.find_matches(lemmas):
            entry = next(e for e in matcher.entries if e.expression_id == match.expression_id)
            assert tuple(lemmas[match.start : match.end]) == entry.lemma_sequence
