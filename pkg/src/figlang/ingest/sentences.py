"""Sentence splitting and SE-text preprocessing.

The splitter is rule-based: fenced code blocks are dropped first (markdown
fences produce spurious "sentences" otherwise), text is split per line, and
lines are split at terminal punctuation with guards for abbreviations,
ellipses, and version-like number tokens. Deterministic for fixed input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional, Sequence

if TYPE_CHECKING:
    from figlang.ingest.github import RawComment

_FENCE_RE = re.compile(r"```.*?```", re.DOTALL)
_INLINE_CODE_RE = re.compile(r"`[^`\n]*`")

# Tokens that end with a period without ending a sentence.
ABBREVIATIONS = {
    "e.g.", "i.e.", "etc.", "vs.", "cf.", "al.", "approx.",
    "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "no.", "fig.", "ver.",
}

_TERMINALS = ".!?"


@dataclass
class Sentence:
    """One sentence of a comment, with its cleaned counterpart."""

    sentence_id: str
    source_comment: dict
    text: str
    word_count: int = 0
    preprocessed_text: str = field(default="")

    def __post_init__(self) -> None:
        if not self.word_count:
            self.word_count = len(self.text.split())
        if not self.preprocessed_text:
            self.preprocessed_text = preprocess_se_text(self.text)

    def to_dict(self) -> dict:
        return {
            "sentence_id": self.sentence_id,
            "source_comment": self.source_comment,
            "text": self.text,
            "word_count": self.word_count,
            "preprocessed_text": self.preprocessed_text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Sentence":
        return cls(
            sentence_id=data["sentence_id"],
            source_comment=data.get("source_comment", {}),
            text=data["text"],
            word_count=data.get("word_count", 0),
            preprocessed_text=data.get("preprocessed_text", ""),
        )


def _is_boundary(line: str, pos: int) -> bool:
    """True when the terminal character at ``pos`` ends a sentence."""
    char = line[pos]
    nxt = pos + 1
    # Consume runs like "..." or "?!" as one terminator.
    if nxt < len(line) and line[nxt] in _TERMINALS:
        return False
    if nxt < len(line) and not line[nxt].isspace():
        return False  # mid-token period: versions, file names, URLs
    if char == ".":
        token_start = line.rfind(" ", 0, pos) + 1
        token = line[token_start : pos + 1].lower()
        if token in ABBREVIATIONS:
            return False
        bare = token.rstrip(".")
        if bare and all(c.isdigit() or c == "." for c in bare):
            return False  # enumeration like "2." or "1.2."
    return True


def split_line(line: str) -> list[str]:
    sentences: list[str] = []
    start = 0
    for pos, char in enumerate(line):
        if char in _TERMINALS and _is_boundary(line, pos):
            piece = line[start : pos + 1].strip()
            if piece:
                sentences.append(piece)
            start = pos + 1
    tail = line[start:].strip()
    if tail:
        sentences.append(tail)
    return sentences


def split_text(text: str) -> list[str]:
    """Split free text into sentences after dropping fenced code blocks."""
    without_fences = _FENCE_RE.sub(" ", text)
    sentences: list[str] = []
    for line in without_fences.splitlines():
        line = line.strip()
        if line:
            sentences.extend(split_line(line))
    return sentences


def split_sentences(comment: "RawComment") -> list["Sentence"]:
    """Sentence records for one comment; empty body yields an empty list."""
    ref = {"repo_slug": comment.repo_slug, "comment_id": comment.comment_id, "kind": comment.kind}
    return [
        Sentence(sentence_id=f"{comment.comment_id}-s{i}", source_comment=ref, text=text)
        for i, text in enumerate(split_text(comment.body))
    ]


def filter_short(sentences: Sequence[Sentence], min_words: int = 5) -> list[Sentence]:
    """Keep sentences with at least ``min_words`` whitespace tokens, in order."""
    if min_words < 1:
        raise ValueError("min_words must be >= 1")
    return [s for s in sentences if s.word_count >= min_words]


_URL_TOKEN = re.compile(r"^(https?://|www\.)", re.IGNORECASE)
_MENTION_TOKEN = re.compile(r"^@\w")

DEFAULT_TRACE_PATTERNS = (
    r"^\s*at\s+[\w$.<>/]+[\w$.<>()/:,\s-]*$",      # JVM-style frames
    r"^\s*File \".*\", line \d+",                   # Python frames
    r"^Traceback \(most recent call last\)",
    r"^\s*Caused by: ",
    r"^\s*(Exception in thread\b.*|[\w.]+(Exception|Error)(:.*)?)$",
)


def preprocess_se_text(text: str, trace_patterns: Optional[Sequence[str]] = None) -> str:
    """Remove URLs, user mentions, and stack-trace lines.

    Other tokens keep their order; surviving lines are re-joined with single
    spaces between tokens and newlines between lines.
    """
    compiled = [re.compile(p) for p in (trace_patterns or DEFAULT_TRACE_PATTERNS)]
    kept_lines: list[str] = []
    in_traceback = False
    for line in text.splitlines():
        if re.match(r"^Traceback \(most recent call last\)", line):
            in_traceback = True
            continue
        if in_traceback:
            # A Python traceback block runs while lines stay indented.
            if line.startswith((" ", "\t")) or not line.strip():
                continue
            in_traceback = False
        if any(p.match(line) for p in compiled):
            continue
        tokens = [
            t for t in line.split() if not _URL_TOKEN.match(t) and not _MENTION_TOKEN.match(t)
        ]
        if tokens:
            kept_lines.append(" ".join(tokens))
    return "\n".join(kept_lines)
