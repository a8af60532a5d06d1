"""Task dataset loaders: GitHub emotions, incivility, and bug priority.

Input files are JSONL or CSV with (id, text, labels) fields; priority
records additionally carry a train/test split tag. Loaders validate label
spaces and emit class-count summaries.
"""

from __future__ import annotations

import csv
import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

logger = logging.getLogger("figlang.bench")

EMOTION_LABELS = ("Anger", "Love", "Fear", "Joy", "Sadness", "Surprise")
INCIVILITY_LABELS = ("Civil", "Uncivil")
PRIORITY_LABELS = ("P1", "P2", "P3", "P4", "P5")

EMOTION_TASK = "emotion6_multilabel"
INCIVILITY_TASK = "incivility_binary"
PRIORITY_TASK = "priority5"


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class TaskItem:
    item_id: str
    text: str
    labels: tuple[str, ...]
    split: Optional[str] = None


@dataclass
class TaskDataset:
    task: str
    items: list[TaskItem]
    label_space: tuple[str, ...]
    multilabel: bool = False

    def class_counts(self) -> dict[str, int]:
        counts = Counter()
        for item in self.items:
            counts.update(item.labels)
        return {label: counts.get(label, 0) for label in self.label_space}

    def split_indices(self) -> Optional[tuple[list[int], list[int]]]:
        """(train, test) index lists when items carry split tags."""
        if any(item.split is None for item in self.items):
            return None
        train = [i for i, item in enumerate(self.items) if item.split == "train"]
        test = [i for i, item in enumerate(self.items) if item.split == "test"]
        return train, test


def _read_records(path: str | Path) -> list[dict]:
    path = Path(path)
    records: list[dict] = []
    if path.suffix.lower() == ".csv":
        with open(path, newline="", encoding="utf-8") as handle:
            for row in csv.DictReader(handle):
                if "labels" in row and isinstance(row["labels"], str):
                    row = dict(row)
                    row["labels"] = [v for v in row["labels"].split(";") if v]
                records.append(row)
    else:
        with open(path, encoding="utf-8") as handle:
            for line_no, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise DatasetError(f"{path}:{line_no}: invalid JSON ({exc})") from exc
    return records


def _labels_of(record: dict, path: Path, index: int) -> list[str]:
    if "labels" in record:
        labels = record["labels"]
    elif "label" in record:
        labels = [record["label"]]
    else:
        raise DatasetError(f"{path}: record {index} is missing a labels field")
    if isinstance(labels, str):
        labels = [labels]
    return list(labels)


def load_emotion_dataset(path: str | Path) -> TaskDataset:
    """Six-class multilabel emotion dataset; empty label sets mean neutral."""
    path = Path(path)
    records = _read_records(path)
    if not records:
        raise DatasetError(f"{path}: emotion dataset file is empty")
    items = []
    for i, record in enumerate(records):
        labels = _labels_of(record, path, i)
        unknown = set(labels) - set(EMOTION_LABELS)
        if unknown:
            raise DatasetError(f"{path}: record {i} has unknown labels {sorted(unknown)}")
        items.append(TaskItem(str(record.get("id", i)), record["text"], tuple(labels)))
    dataset = TaskDataset(EMOTION_TASK, items, EMOTION_LABELS, multilabel=True)
    logger.info("emotion dataset: %d items, class counts %s", len(items), dataset.class_counts())
    return dataset


def load_incivility_dataset(path: str | Path) -> TaskDataset:
    """Binary Civil/Uncivil dataset; Technical comments are filtered out."""
    path = Path(path)
    records = _read_records(path)
    if not records:
        raise DatasetError(f"{path}: incivility dataset file is empty")
    items = []
    dropped = 0
    for i, record in enumerate(records):
        labels = _labels_of(record, path, i)
        if len(labels) != 1:
            raise DatasetError(f"{path}: record {i} must carry exactly one class")
        label = labels[0]
        if label == "Technical":
            dropped += 1
            continue
        if label not in INCIVILITY_LABELS:
            raise DatasetError(f"{path}: record {i} has unknown class {label!r}")
        items.append(TaskItem(str(record.get("id", i)), record["text"], (label,)))
    if not items:
        logger.warning("incivility dataset %s contains only Technical comments", path)
    dataset = TaskDataset(INCIVILITY_TASK, items, INCIVILITY_LABELS)
    logger.info(
        "incivility dataset: %d items after dropping %d Technical, counts %s",
        len(items), dropped, dataset.class_counts(),
    )
    return dataset


def load_priority_dataset(
    path: str | Path, sample_fraction: float = 0.25, seed: int = 0
) -> TaskDataset:
    """P1..P5 priority dataset with provided train/test splits.

    Each split is sampled per class at ``sample_fraction``, which keeps
    class shares within half a percentage point of the full file.
    """
    if not 0.0 < sample_fraction <= 1.0:
        raise DatasetError(f"sample_fraction must lie in (0, 1], got {sample_fraction}")
    path = Path(path)
    records = _read_records(path)
    if not records:
        raise DatasetError(f"{path}: priority dataset file is empty")
    all_items: list[TaskItem] = []
    for i, record in enumerate(records):
        labels = _labels_of(record, path, i)
        if len(labels) != 1 or labels[0] not in PRIORITY_LABELS:
            raise DatasetError(f"{path}: record {i} must carry exactly one P1..P5 label")
        split = record.get("split")
        if split not in ("train", "test"):
            raise DatasetError(f"{path}: record {i} is missing a train/test split tag")
        all_items.append(TaskItem(str(record.get("id", i)), record["text"], (labels[0],), split))

    if sample_fraction >= 1.0:
        sampled = all_items
    else:
        rng = random.Random(seed)
        keep: set[int] = set()
        groups: dict[tuple[str, str], list[int]] = {}
        for idx, item in enumerate(all_items):
            groups.setdefault((item.split or "", item.labels[0]), []).append(idx)
        for key in sorted(groups):
            idxs = list(groups[key])
            rng.shuffle(idxs)
            n_keep = int(round(sample_fraction * len(idxs)))
            keep.update(idxs[:n_keep])
        sampled = [item for idx, item in enumerate(all_items) if idx in keep]
    dataset = TaskDataset(PRIORITY_TASK, sampled, PRIORITY_LABELS)
    logger.info("priority dataset: %d items sampled at %.2f", len(sampled), sample_fraction)
    return dataset


def split_shares(dataset: TaskDataset, split: str) -> dict[str, float]:
    """Per-class percentage shares within one split of a priority dataset."""
    items = [item for item in dataset.items if item.split == split]
    if not items:
        return {label: 0.0 for label in dataset.label_space}
    counts = Counter(item.labels[0] for item in items)
    return {label: 100.0 * counts.get(label, 0) / len(items) for label in dataset.label_space}
