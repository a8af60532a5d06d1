"""Comment fetching, sentence splitting, filtering, preprocessing, screening."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from figlang.ingest import (
    AuthenticationError,
    CandidateSpan,
    DetectorResult,
    GithubCommentClient,
    KeywordAffectScreen,
    LexiconDetector,
    RawComment,
    ReplayTransport,
    ScriptedDetector,
    Sentence,
    UnknownRepoError,
    filter_short,
    preprocess_se_text,
    screen_candidates,
    split_sentences,
    split_text,
)
from figlang.ingest.github import read_comment_store

DATA = Path(__file__).parent / "data"


def _comment(body: str, comment_id: str = "c1") -> RawComment:
    return RawComment(
        repo_slug="acme/rocket",
        kind="issue",
        comment_id=comment_id,
        author="dev",
        created_at=datetime(2023, 3, 1, tzinfo=timezone.utc),
        body=body,
    )


# ------------------------------------------------------------------ splitting

def test_split_two_sentences():
    assert split_text("Fix merged. Thanks a lot everyone!") == [
        "Fix merged.",
        "Thanks a lot everyone!",
    ]


def test_split_empty():
    assert split_text("") == []
    assert split_sentences(_comment("   x   ")) == [
        Sentence("c1-s0", {"repo_slug": "acme/rocket", "comment_id": "c1", "kind": "issue"}, "x")
    ]


def test_split_matches_hand_segmented_fixture():
    fixture = json.loads((DATA / "comments_20.json").read_text(encoding="utf-8"))
    assert len(fixture) == 20
    for i, entry in enumerate(fixture):
        comment = _comment(entry["body"], comment_id=f"c{i:02d}")
        sentences = split_sentences(comment)
        assert len(sentences) == entry["expected_sentences"], entry["body"]
        for s in sentences:
            assert s.word_count == len(s.text.split())


def test_split_deterministic():
    body = json.loads((DATA / "comments_20.json").read_text(encoding="utf-8"))[7]["body"]
    assert split_text(body) == split_text(body)


def test_split_drops_fenced_code():
    body = "Before the fence.\n```\nx = 1. y = 2! z?\n```\nAfter the fence."
    assert split_text(body) == ["Before the fence.", "After the fence."]


# ------------------------------------------------------------------ filtering

def test_filter_short_examples():
    four = Sentence("a", {}, "I see your point")
    seven = Sentence("b", {}, "this could give us a nasty bug")
    assert filter_short([four, seven]) == [seven]


def test_filter_short_brute_force_recount():
    texts = [
        "one", "one two", "one two three four five", "a b c d e f g",
        "tiny", "exactly five words right here", "six words are in this sentence",
        "four words only here", "this has a full seven words", "ok",
    ]
    sentences = [Sentence(f"s{i}", {}, t) for i, t in enumerate(texts)]
    survivors = filter_short(sentences, 5)
    brute = [s for s in sentences if len(s.text.split()) >= 5]
    assert survivors == brute
    assert [s.sentence_id for s in survivors] == [s.sentence_id for s in brute]


def test_filter_short_idempotent():
    sentences = [Sentence(f"s{i}", {}, "w " * (i + 1)) for i in range(10)]
    once = filter_short(sentences, 5)
    assert filter_short(once, 5) == once


def test_filter_short_validates_min_words():
    with pytest.raises(ValueError):
        filter_short([], 0)


# -------------------------------------------------------------- preprocessing

def test_preprocess_removes_urls_and_mentions():
    assert preprocess_se_text("see https://x.example @bob thanks") == "see thanks"


def test_preprocess_identity_on_clean_text():
    assert preprocess_se_text("no noise here") == "no noise here"


def test_preprocess_stack_trace_line_oracle():
    entries = json.loads((DATA / "trace_lines.json").read_text(encoding="utf-8"))
    text = "\n".join(e["line"] for e in entries)
    result = preprocess_se_text(text)
    kept_lines = result.splitlines()
    expected = [e["line"].strip() for e in entries if e["kind"] == "prose"]
    # Token order within prose lines is unchanged; whitespace normalizes.
    assert [" ".join(l.split()) for l in kept_lines] == [" ".join(l.split()) for l in expected]


def test_preprocess_preserves_token_order():
    assert preprocess_se_text("alpha @user beta http://x gamma") == "alpha beta gamma"


# ------------------------------------------------------------------- fetching

def test_fetch_zero_limit_empty():
    client = GithubCommentClient(transport=ReplayTransport(DATA / "github_replay_3.json"))
    result = client.fetch_comments("acme/rocket", limit=0)
    assert result.comments == [] and not result.partial


def test_fetch_replay_three_comments(tmp_path):
    client = GithubCommentClient(transport=ReplayTransport(DATA / "github_replay_3.json"))
    store = tmp_path / "raw.jsonl"
    result = client.fetch_comments("acme/rocket", kind="issue", limit=10, store_path=store)
    assert [c.comment_id for c in result.comments] == ["101", "102", "103"]
    assert not result.partial
    assert all(c.kind == "issue" for c in result.comments)
    reloaded = read_comment_store(store)
    assert [c.comment_id for c in reloaded] == ["101", "102", "103"]
    assert reloaded[0].body.startswith("This nasty bug")


def test_fetch_respects_limit_and_window():
    client = GithubCommentClient(transport=ReplayTransport(DATA / "github_replay_3.json"))
    result = client.fetch_comments("acme/rocket", limit=2)
    assert len(result.comments) == 2

    client = GithubCommentClient(transport=ReplayTransport(DATA / "github_replay_3.json"))
    window = (
        datetime(2023, 2, 11, tzinfo=timezone.utc),
        datetime(2023, 2, 11, 23, 59, tzinfo=timezone.utc),
    )
    result = client.fetch_comments("acme/rocket", window=window, limit=10)
    assert [c.comment_id for c in result.comments] == ["102"]


def test_fetch_pagination_dedupes():
    page = [
        {"id": 1, "user": {"login": "a"}, "created_at": "2023-01-01T00:00:00Z", "body": "first body"},
        {"id": 2, "user": {"login": "b"}, "created_at": "2023-01-02T00:00:00Z", "body": "second body"},
    ]
    page2 = [
        {"id": 2, "user": {"login": "b"}, "created_at": "2023-01-02T00:00:00Z", "body": "second body"},
        {"id": 3, "user": {"login": "c"}, "created_at": "2023-01-03T00:00:00Z", "body": "third body"},
    ]
    responses = iter([(200, {}, page), (200, {}, page2), (200, {}, [])])

    def transport(method, url, params, headers):
        return next(responses)

    client = GithubCommentClient(transport=transport, page_size=2)
    result = client.fetch_comments("acme/rocket", limit=10)
    assert [c.comment_id for c in result.comments] == ["1", "2", "3"]


def test_fetch_auth_and_unknown_repo_errors():
    client = GithubCommentClient(transport=lambda *a: (401, {}, {}))
    with pytest.raises(AuthenticationError):
        client.fetch_comments("acme/rocket", limit=1)
    client = GithubCommentClient(transport=lambda *a: (404, {}, {}))
    with pytest.raises(UnknownRepoError):
        client.fetch_comments("acme/nope", limit=1)


def test_fetch_rate_limit_partial_results():
    calls = {"n": 0}
    page = [{"id": 1, "user": {"login": "a"}, "created_at": "2023-01-01T00:00:00Z", "body": "hello there"}]

    def transport(method, url, params, headers):
        calls["n"] += 1
        if calls["n"] == 1:
            return 200, {}, page
        return 403, {"X-RateLimit-Remaining": "0"}, {}

    waits = []
    client = GithubCommentClient(
        transport=transport, page_size=1, max_retries=2, backoff_s=0.5, sleep=waits.append
    )
    result = client.fetch_comments("acme/rocket", limit=10)
    assert result.partial and "rate limit" in result.reason
    assert [c.comment_id for c in result.comments] == ["1"]
    assert waits == [0.5, 1.0]  # exponential backoff before giving up


def test_missing_token_raises():
    import os

    before = os.environ.pop("GH_TOKEN", None)
    try:
        with pytest.raises(AuthenticationError):
            GithubCommentClient()
    finally:
        if before is not None:
            os.environ["GH_TOKEN"] = before


# ------------------------------------------------------------------ screening

def _sentences(texts):
    return [Sentence(f"s{i}", {}, t) for i, t in enumerate(texts)]


def test_screen_stub_flagging_nothing():
    sentences = _sentences(["this is a neutral sentence about code"])
    empty = ScriptedDetector({})
    out = screen_candidates(sentences, empty, empty, ScriptedDetector({}, fail_on=[]))
    assert out == []


def test_screen_single_candidate_path():
    text = "this could give us a nasty bug"
    span = CandidateSpan(text.index("nasty bug"), text.index("nasty bug") + 9, "nasty bug")
    metaphors = ScriptedDetector({text: DetectorResult(spans=[span])})
    idioms = ScriptedDetector({})
    affect = ScriptedDetector({text: DetectorResult(label="affective")})
    out = screen_candidates(_sentences([text]), metaphors, idioms, affect)
    assert len(out) == 1
    assert out[0].metaphor_candidates == [span]
    assert out[0].affect_screen == "affective"


def test_screen_set_algebra_oracle():
    texts = [f"sentence number {i} words here filler" for i in range(50)]
    metaphor_hits = {t for i, t in enumerate(texts) if i % 3 == 0}
    idiom_hits = {t for i, t in enumerate(texts) if i % 5 == 0}
    affective = {t for i, t in enumerate(texts) if i % 2 == 0}
    span = CandidateSpan(0, 8, "sentence")
    metaphors = ScriptedDetector({t: DetectorResult(spans=[span]) for t in metaphor_hits})
    idioms = ScriptedDetector({t: DetectorResult(spans=[span]) for t in idiom_hits})
    affect = ScriptedDetector(
        {t: DetectorResult(label="affective" if t in affective else "neutral") for t in texts}
    )
    out = screen_candidates(_sentences(texts), metaphors, idioms, affect)
    expected = {t for t in texts if t in affective and (t in metaphor_hits or t in idiom_hits)}
    assert {c.sentence.text for c in out} == expected


def test_screen_sentiment_failure_keeps_item_unscreened():
    text = "the nasty bug strikes again tonight"
    span = CandidateSpan(4, 13, "nasty bug")
    metaphors = ScriptedDetector({text: DetectorResult(spans=[span])})
    idioms = ScriptedDetector({})
    affect = ScriptedDetector({}, fail_on=[text])
    out = screen_candidates(_sentences([text]), metaphors, idioms, affect)
    assert len(out) == 1
    assert out[0].affect_screen == "unscreened"


def test_screen_monotonicity_pipeline():
    fixture = json.loads((DATA / "comments_20.json").read_text(encoding="utf-8"))
    comments = [_comment(e["body"], f"c{i}") for i, e in enumerate(fixture)]
    sentences = [s for c in comments for s in split_sentences(c)]
    kept = filter_short(sentences, 5)
    detector = LexiconDetector(["nasty bug", "ship it"])
    out = screen_candidates(kept, detector, LexiconDetector([]), KeywordAffectScreen())
    assert len(sentences) >= len(kept) >= len(out)


def test_lexicon_detector_spans_within_bounds():
    detector = LexiconDetector(["edge case"])
    results = detector.score_batch(["an Edge Case appeared", "no match"])
    assert len(results[0].spans) == 1
    span = results[0].spans[0]
    assert span.surface == "Edge Case"
    assert results[1].spans == []
