"""Multi-pattern phrase matching over lemma sequences.

An Aho-Corasick automaton over the token alphabet finds every lexicon
entry as a contiguous subsequence of a sentence's lemma sequence in one
linear pass. Matches nested inside a longer match are dropped, so "root
cause" inside "root cause analysis" counts once.
"""

from __future__ import annotations

import csv
import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from figlang.prevalence.normalize import LemmatizerAdapter, normalize_for_matching

logger = logging.getLogger("figlang.prevalence")

SCOPES = ("se_specific", "general")


@dataclass(frozen=True)
class LexiconEntry:
    expression_id: str
    surface: str
    lemma_sequence: tuple[str, ...]
    scope: str

    def __post_init__(self) -> None:
        if not self.lemma_sequence:
            raise ValueError(f"entry {self.expression_id} has an empty lemma sequence")
        if self.scope not in SCOPES:
            raise ValueError(f"entry {self.expression_id} has unknown scope {self.scope!r}")


@dataclass
class ExpressionLexicon:
    entries: list[LexiconEntry]

    def __post_init__(self) -> None:
        ids = [e.expression_id for e in self.entries]
        if len(ids) != len(set(ids)):
            raise ValueError("lexicon expression_ids must be unique")

    @classmethod
    def from_surfaces(
        cls,
        surfaces: Iterable[tuple[str, str, str]],
        lemmatizer: Optional[LemmatizerAdapter] = None,
    ) -> "ExpressionLexicon":
        """Build from (expression_id, surface, scope) rows, normalizing surfaces."""
        entries = [
            LexiconEntry(eid, surface, tuple(normalize_for_matching(surface, lemmatizer)), scope)
            for eid, surface, scope in surfaces
        ]
        return cls(entries)

    @classmethod
    def from_csv(cls, path: str | Path, lemmatizer: Optional[LemmatizerAdapter] = None) -> "ExpressionLexicon":
        """Read a lexicon CSV with columns expression_id, surface, scope."""
        rows: list[tuple[str, str, str]] = []
        with open(path, newline="", encoding="utf-8") as handle:
            for record in csv.DictReader(handle):
                rows.append((record["expression_id"], record["surface"], record["scope"]))
        return cls.from_surfaces(rows, lemmatizer)


@dataclass(frozen=True)
class Match:
    expression_id: str
    start: int
    end: int  # exclusive token index
    scope: str


@dataclass
class _Node:
    children: dict[str, int] = field(default_factory=dict)
    fail: int = 0
    outputs: list[int] = field(default_factory=list)  # entry indices ending here


class Matcher:
    """Compiled automaton for one lexicon."""

    def __init__(self, entries: Sequence[LexiconEntry]) -> None:
        self.entries = list(entries)
        self.nodes: list[_Node] = [_Node()]
        for index, entry in enumerate(self.entries):
            state = 0
            for token in entry.lemma_sequence:
                nxt = self.nodes[state].children.get(token)
                if nxt is None:
                    self.nodes.append(_Node())
                    nxt = len(self.nodes) - 1
                    self.nodes[state].children[token] = nxt
                state = nxt
            self.nodes[state].outputs.append(index)
        self._build_failure_links()

    def _build_failure_links(self) -> None:
        queue: deque[int] = deque()
        for child in self.nodes[0].children.values():
            self.nodes[child].fail = 0
            queue.append(child)
        while queue:
            state = queue.popleft()
            for token, child in self.nodes[state].children.items():
                queue.append(child)
                fallback = self.nodes[state].fail
                while fallback and token not in self.nodes[fallback].children:
                    fallback = self.nodes[fallback].fail
                self.nodes[child].fail = self.nodes[fallback].children.get(token, 0)
                self.nodes[child].outputs.extend(self.nodes[self.nodes[child].fail].outputs)

    def find_matches(self, lemmas: Sequence[str]) -> list[Match]:
        """All lexicon phrases in the lemma sequence, longest match kept
        where one phrase contains another."""
        raw: list[Match] = []
        state = 0
        for pos, token in enumerate(lemmas):
            while state and token not in self.nodes[state].children:
                state = self.nodes[state].fail
            state = self.nodes[state].children.get(token, 0)
            for entry_index in self.nodes[state].outputs:
                entry = self.entries[entry_index]
                length = len(entry.lemma_sequence)
                raw.append(Match(entry.expression_id, pos - length + 1, pos + 1, entry.scope))
        return _drop_nested(raw)


def _drop_nested(matches: list[Match]) -> list[Match]:
    kept: list[Match] = []
    for m in matches:
        contained = any(
            other is not m
            and other.start <= m.start
            and m.end <= other.end
            and (other.end - other.start) > (m.end - m.start)
            for other in matches
        )
        if not contained:
            kept.append(m)
    kept.sort(key=lambda m: (m.start, m.end, m.expression_id))
    return kept


def build_matcher(lexicon: ExpressionLexicon) -> Matcher:
    """Compile a lexicon, collapsing duplicate lemma sequences with a warning."""
    if not lexicon.entries:
        raise ValueError("cannot build a matcher from an empty lexicon")
    seen: dict[tuple[str, ...], LexiconEntry] = {}
    duplicates = 0
    for entry in lexicon.entries:
        if entry.lemma_sequence in seen:
            duplicates += 1
            continue
        seen[entry.lemma_sequence] = entry
    if duplicates:
        logger.warning("collapsed %d duplicate lemma sequences while building matcher", duplicates)
    return Matcher(list(seen.values()))
