"""Deterministic stratified train/test splitting."""

from __future__ import annotations

import math
import random
from typing import Hashable, Sequence


def stratified_split(
    items: Sequence,
    labels: Sequence[Hashable],
    train_fraction: float = 0.8,
    seed: int = 0,
) -> tuple[list[int], list[int]]:
    """Split item indices into (train, test), stratified by label.

    Each class keeps a train share within one item of ``train_fraction``
    and contributes at least one item to each side. Returns sorted index
    lists forming a partition of ``range(len(items))``.
    """
    if len(items) != len(labels):
        raise ValueError(f"items/labels length mismatch: {len(items)} vs {len(labels)}")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    by_class: dict[Hashable, list[int]] = {}
    for i, label in enumerate(labels):
        by_class.setdefault(label, []).append(i)
    rng = random.Random(seed)
    train: list[int] = []
    test: list[int] = []
    for label in sorted(by_class, key=repr):
        idxs = list(by_class[label])
        if len(idxs) < 2:
            raise ValueError(f"class {label!r} has fewer than 2 items; cannot stratify")
        rng.shuffle(idxs)
        n_train = int(math.floor(train_fraction * len(idxs) + 0.5))
        n_train = max(1, min(len(idxs) - 1, n_train))
        train.extend(idxs[:n_train])
        test.extend(idxs[n_train:])
    return sorted(train), sorted(test)
