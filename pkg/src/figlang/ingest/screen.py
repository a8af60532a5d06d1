"""Candidate screening: figurative-span detectors and the affect screen.

Detectors are adapters (batch text in, spans/label out); the bundled ones
are lexicon- and wordlist-based so the pipeline runs offline. Production
runs plug in real metaphor/idiom detectors and a sentiment tool through the
same contract.
"""

from __future__ import annotations

import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from figlang.ingest.sentences import Sentence

logger = logging.getLogger("figlang.ingest")

AFFECTIVE = "affective"
NEUTRAL = "neutral"
UNSCREENED = "unscreened"


@dataclass(frozen=True)
class CandidateSpan:
    start: int
    end: int
    surface: str


@dataclass
class DetectorResult:
    """Either candidate spans, a screen label, or both."""

    spans: list[CandidateSpan] = field(default_factory=list)
    label: Optional[str] = None


class DetectorAdapter(ABC):
    """Batch scoring contract shared by span detectors and affect screens."""

    @abstractmethod
    def score_batch(self, texts: Sequence[str]) -> list[DetectorResult]:
        raise NotImplementedError


class LexiconDetector(DetectorAdapter):
    """Flags occurrences of known surfaces via word-boundary search."""

    def __init__(self, surfaces: Iterable[str]) -> None:
        self.patterns = [
            (surface, re.compile(rf"\b{re.escape(surface.lower())}\b"))
            for surface in sorted(set(surfaces))
        ]

    def score_batch(self, texts: Sequence[str]) -> list[DetectorResult]:
        results = []
        for text in texts:
            lowered = text.lower()
            spans = []
            for surface, pattern in self.patterns:
                for hit in pattern.finditer(lowered):
                    spans.append(CandidateSpan(hit.start(), hit.end(), text[hit.start() : hit.end()]))
            spans.sort(key=lambda s: (s.start, s.end))
            results.append(DetectorResult(spans=spans))
        return results


class KeywordAffectScreen(DetectorAdapter):
    """Marks a sentence affective when any affect keyword occurs."""

    DEFAULT_KEYWORDS = (
        "thanks", "thank", "sorry", "great", "awesome", "love", "hate", "annoying",
        "nasty", "terrible", "horrible", "wonderful", "nice", "bad", "good", "worst",
        "amazing", "frustrating", "happy", "sad", "angry", "fear", "afraid", "ugh",
        "wow", "please", "appreciate", "broken", "painful",
    )

    def __init__(self, keywords: Optional[Iterable[str]] = None) -> None:
        self.keywords = {k.lower() for k in (keywords or self.DEFAULT_KEYWORDS)}

    def score_batch(self, texts: Sequence[str]) -> list[DetectorResult]:
        results = []
        for text in texts:
            tokens = {t.strip(".,!?;:()[]\"'").lower() for t in text.split()}
            label = AFFECTIVE if tokens & self.keywords else NEUTRAL
            results.append(DetectorResult(label=label))
        return results


class ScriptedDetector(DetectorAdapter):
    """Test double driven by an explicit text -> result table."""

    def __init__(self, script: dict[str, DetectorResult], fail_on: Iterable[str] = ()) -> None:
        self.script = script
        self.fail_on = set(fail_on)

    def score_batch(self, texts: Sequence[str]) -> list[DetectorResult]:
        results = []
        for text in texts:
            if text in self.fail_on:
                raise RuntimeError(f"scripted failure for {text!r}")
            results.append(self.script.get(text, DetectorResult()))
        return results


@dataclass
class CandidateSentence:
    sentence: Sentence
    metaphor_candidates: list[CandidateSpan] = field(default_factory=list)
    idiom_candidates: list[CandidateSpan] = field(default_factory=list)
    affect_screen: str = UNSCREENED

    def to_dict(self) -> dict:
        return {
            "sentence": self.sentence.to_dict(),
            "metaphor_candidates": [[s.start, s.end, s.surface] for s in self.metaphor_candidates],
            "idiom_candidates": [[s.start, s.end, s.surface] for s in self.idiom_candidates],
            "affect_screen": self.affect_screen,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CandidateSentence":
        return cls(
            sentence=Sentence.from_dict(data["sentence"]),
            metaphor_candidates=[CandidateSpan(*s) for s in data.get("metaphor_candidates", [])],
            idiom_candidates=[CandidateSpan(*s) for s in data.get("idiom_candidates", [])],
            affect_screen=data.get("affect_screen", UNSCREENED),
        )


def _score_with_fallback(
    adapter: DetectorAdapter, texts: list[str]
) -> list[Optional[DetectorResult]]:
    """Batch call first; on failure score items singly, None marks failures."""
    try:
        return list(adapter.score_batch(texts))
    except Exception as exc:  # noqa: BLE001 - adapter boundary
        logger.warning("batch scoring failed (%s); retrying per item", exc)
    results: list[Optional[DetectorResult]] = []
    for text in texts:
        try:
            results.append(adapter.score_batch([text])[0])
        except Exception as exc:  # noqa: BLE001
            logger.warning("detector failed on %r: %s", text, exc)
            results.append(None)
    return results


def _valid_spans(spans: Sequence[CandidateSpan], text: str) -> list[CandidateSpan]:
    kept = []
    for span in spans:
        if 0 <= span.start < span.end <= len(text):
            kept.append(span)
        else:
            logger.warning("dropping out-of-bounds span %s for %r", span, text)
    return kept


def screen_candidates(
    sentences: Sequence[Sentence],
    metaphor_detector: DetectorAdapter,
    idiom_detector: DetectorAdapter,
    sentiment_screen: DetectorAdapter,
) -> list[CandidateSentence]:
    """Keep non-neutral sentences that carry at least one candidate span.

    Adapter failures never drop an item silently: a failed affect screen
    yields ``unscreened`` (kept when candidates exist) and a failed detector
    contributes no spans.
    """
    texts = [s.text for s in sentences]
    metaphor_results = _score_with_fallback(metaphor_detector, texts)
    idiom_results = _score_with_fallback(idiom_detector, texts)
    affect_results = _score_with_fallback(sentiment_screen, texts)

    out: list[CandidateSentence] = []
    for sentence, met, idi, aff in zip(sentences, metaphor_results, idiom_results, affect_results):
        metaphors = _valid_spans(met.spans, sentence.text) if met else []
        idioms = _valid_spans(idi.spans, sentence.text) if idi else []
        if aff is None or aff.label is None:
            affect = UNSCREENED
        else:
            affect = aff.label
        if affect == NEUTRAL:
            continue
        if not metaphors and not idioms:
            continue
        out.append(
            CandidateSentence(
                sentence=sentence,
                metaphor_candidates=metaphors,
                idiom_candidates=idioms,
                affect_screen=affect,
            )
        )
    return out
