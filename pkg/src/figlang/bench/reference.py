"""Deterministic builders for the shipped benchmark reference files.

Class distributions mirror the published task datasets: the 2000-comment
six-emotion set, the 718-comment Civil/Uncivil set (plus the Technical
comments its loader filters out), and a priority file whose train/test
splits carry the published P1..P5 shares.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

EMOTION_COUNTS = {
    "Anger": 340, "Love": 220, "Fear": 198, "Joy": 422, "Sadness": 274, "Surprise": 328,
}
EMOTION_TOTAL = 2000

INCIVILITY_COUNTS = {"Civil": 232, "Uncivil": 486, "Technical": 82}

PRIORITY_COUNTS = {
    "train": {"P1": 1956, "P2": 1845, "P3": 5812, "P4": 166, "P5": 221},
    "test": {"P1": 1921, "P2": 1766, "P3": 5950, "P4": 148, "P5": 215},
}

_EMOTION_PHRASES = {
    "Anger": "this regression is infuriating and the report sat unread for weeks",
    "Love": "huge thanks, this maintainer community is wonderful to work with",
    "Fear": "I am worried this migration will corrupt production data",
    "Joy": "fantastic, the new release finally fixed our oldest ticket",
    "Sadness": "sadly we have to drop support for the old plugin",
    "Surprise": "wow, I did not expect the parser to accept that input",
    None: "the build matrix was updated to include the new toolchain",
}

_INCIVILITY_PHRASES = {
    "Civil": "thanks for the patch, could you add a regression test as well",
    "Uncivil": "this is a garbage change and you clearly never ran the tests",
    "Technical": "the allocator aligns blocks to sixteen bytes on this target",
}

_PRIORITY_PHRASES = {
    "P1": "crash on startup blocks every user immediately",
    "P2": "deadlock when saving large projects under load",
    "P3": "misleading log message when the cache is cold",
    "P4": "typo in the preferences dialog tooltip",
    "P5": "cosmetic misalignment of the about box logo",
}


def build_emotion_records(seed: int = 11) -> list[dict]:
    labels: list[tuple[str, ...]] = []
    for label, count in EMOTION_COUNTS.items():
        labels.extend([(label,)] * count)
    labels.extend([()] * (EMOTION_TOTAL - len(labels)))
    rng = random.Random(seed)
    rng.shuffle(labels)
    records = []
    for i, label_set in enumerate(labels):
        phrase = _EMOTION_PHRASES[label_set[0] if label_set else None]
        records.append(
            {"id": f"emo-{i:04d}", "text": f"Comment {i}: {phrase}.", "labels": list(label_set)}
        )
    return records


def build_incivility_records(seed: int = 12) -> list[dict]:
    labels: list[str] = []
    for label, count in INCIVILITY_COUNTS.items():
        labels.extend([label] * count)
    rng = random.Random(seed)
    rng.shuffle(labels)
    return [
        {"id": f"inc-{i:04d}", "text": f"Thread {i}: {_INCIVILITY_PHRASES[label]}.", "labels": [label]}
        for i, label in enumerate(labels)
    ]


def build_priority_records(seed: int = 13) -> list[dict]:
    rng = random.Random(seed)
    records = []
    index = 0
    for split, counts in PRIORITY_COUNTS.items():
        rows: list[str] = []
        for label, count in counts.items():
            rows.extend([label] * count)
        rng.shuffle(rows)
        for label in rows:
            records.append(
                {
                    "id": f"bug-{index:05d}",
                    "text": f"Bug {index}: {_PRIORITY_PHRASES[label]}.",
                    "labels": [label],
                    "split": split,
                }
            )
            index += 1
    return records


def write_jsonl(records: list[dict], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False))
            handle.write("\n")
