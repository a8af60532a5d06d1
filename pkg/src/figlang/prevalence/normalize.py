"""Sentence normalization for lexicon matching: lowercase, strip
non-alphabetic characters, lemmatize.

The lemmatizer is an adapter so a full NLP pipeline can be plugged in for
production scans; the built-in rule lemmatizer handles regular English
inflection plus a table of common irregular forms, enough for offline runs
and tests.
"""

from __future__ import annotations

import re
from typing import Optional, Protocol


class LemmatizerAdapter(Protocol):
    def lemmatize(self, token: str) -> str: ...


_IRREGULAR = {
    "found": "find",
    "kept": "keep",
    "went": "go",
    "gone": "go",
    "ran": "run",
    "made": "make",
    "left": "leave",
    "built": "build",
    "broke": "break",
    "broken": "break",
    "taken": "take",
    "took": "take",
    "gave": "give",
    "given": "give",
    "got": "get",
    "gotten": "get",
    "threw": "throw",
    "thrown": "throw",
    "caught": "catch",
    "brought": "bring",
    "thought": "think",
    "came": "come",
    "saw": "see",
    "seen": "see",
    "did": "do",
    "done": "do",
    "said": "say",
    "told": "tell",
    "felt": "feel",
    "lost": "lose",
    "paid": "pay",
    "sat": "sit",
    "stood": "stand",
    "held": "hold",
    "hit": "hit",
    "put": "put",
    "wrote": "write",
    "written": "write",
    "ate": "eat",
    "eaten": "eat",
    "fell": "fall",
    "fallen": "fall",
    "grew": "grow",
    "grown": "grow",
    "knew": "know",
    "known": "know",
    "was": "be",
    "were": "be",
    "is": "be",
    "are": "be",
    "been": "be",
    "has": "have",
    "had": "have",
    "mice": "mouse",
    "feet": "foot",
    "men": "man",
    "women": "woman",
    "children": "child",
    "making": "make",
    "taking": "take",
    "giving": "give",
    "using": "use",
    "having": "have",
    "coming": "come",
    "writing": "write",
    "dying": "die",
}

_DOUBLED = re.compile(r"([b-df-hj-np-tv-z])\1$")


class RuleLemmatizer:
    """Suffix-stripping English lemmatizer with an irregular-form table."""

    def lemmatize(self, token: str) -> str:
        token = token.lower()
        if token in _IRREGULAR:
            return _IRREGULAR[token]
        if token.endswith("ies") and len(token) > 4:
            return token[:-3] + "y"
        if token.endswith(("xes", "ches", "shes", "zes", "sses")):
            return token[:-2]
        if token.endswith("ss"):
            return token
        if token.endswith("s") and len(token) > 3 and not token.endswith(("us", "is")):
            return token[:-1]
        if token.endswith("ing") and len(token) > 5:
            stem = token[:-3]
            return _DOUBLED.sub(r"\1", stem)
        if token.endswith("ied") and len(token) > 4:
            return token[:-3] + "y"
        if token.endswith("ed") and len(token) > 4:
            stem = token[:-2]
            return _DOUBLED.sub(r"\1", stem)
        return token


_DEFAULT_LEMMATIZER = RuleLemmatizer()
_NON_ALPHA = re.compile(r"[^a-z]+")


def normalize_for_matching(
    sentence: str, lemmatizer: Optional[LemmatizerAdapter] = None
) -> list[str]:
    """Lowercase lemma tokens of a sentence.

    Hyphens (and every other non-alphabetic character) act as token
    separators, so "root-cause" and "root cause" normalize identically;
    digits and punctuation are dropped.
    """
    lemmatizer = lemmatizer or _DEFAULT_LEMMATIZER
    parts = _NON_ALPHA.split(sentence.lower())
    return [lemmatizer.lemmatize(p) for p in parts if p]


def normalize_expression(surface: str, lemmatizer: Optional[LemmatizerAdapter] = None) -> tuple[str, ...]:
    """Canonical lemma key of an expression surface, for uniqueness counting."""
    return tuple(normalize_for_matching(surface, lemmatizer))
