"""Baseline vs figurative-fine-tuned comparison on one task dataset.

Both variants start from clones of the same encoder: the FL variant is
contrastively fine-tuned on the triplets first, the baseline is left
untouched. Both then get an identical, identically-seeded linear
classification head (per-class sigmoid for multilabel, softmax otherwise)
and are evaluated on the same test split.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from sklearn.linear_model import LogisticRegression

from figlang.bench.datasets import TaskDataset
from figlang.contrastive.train import TrainConfig, finetune
from figlang.geom.encoders import EncoderAdapter, TrainableEncoderAdapter
from figlang.geom.pooling import mean_pool
from figlang.figdata.model import TripletRecord
from figlang.stats import MetricsReport, classification_metrics, stratified_split

logger = logging.getLogger("figlang.bench")


@dataclass(frozen=True)
class TaskRunConfig:
    head_seed: int = 0
    split_seed: int = 0
    train_fraction: float = 0.8
    threshold: float = 0.5  # multilabel decision threshold on class scores
    fl_enabled: bool = True
    max_iter: int = 2000

    def to_dict(self) -> dict:
        return {
            "head_seed": self.head_seed,
            "split_seed": self.split_seed,
            "train_fraction": self.train_fraction,
            "threshold": self.threshold,
            "fl_enabled": self.fl_enabled,
            "max_iter": self.max_iter,
        }


class LinearHead:
    """Single linear layer over pooled vectors, sklearn-backed.

    Degenerate classes (absent or universal in training) fall back to
    constant predictions instead of failing the fit.
    """

    def __init__(self, labels: Sequence[str], multilabel: bool, cfg: TaskRunConfig) -> None:
        self.labels = list(labels)
        self.multilabel = multilabel
        self.cfg = cfg
        self._models: dict[str, Optional[LogisticRegression]] = {}
        self._constants: dict[str, bool] = {}
        self._multiclass_model: Optional[LogisticRegression] = None
        self._constant_class: Optional[str] = None

    def fit(self, x: np.ndarray, labels: Sequence[tuple[str, ...]]) -> "LinearHead":
        if self.multilabel:
            for label in self.labels:
                y = np.array([1 if label in item else 0 for item in labels])
                if y.min() == y.max():
                    self._models[label] = None
                    self._constants[label] = bool(y[0])
                    continue
                model = LogisticRegression(max_iter=self.cfg.max_iter, random_state=self.cfg.head_seed)
                model.fit(x, y)
                self._models[label] = model
        else:
            y = np.array([item[0] for item in labels])
            if len(set(y)) == 1:
                self._constant_class = str(y[0])
            else:
                self._multiclass_model = LogisticRegression(
                    max_iter=self.cfg.max_iter, random_state=self.cfg.head_seed
                )
                self._multiclass_model.fit(x, y)
        return self

    def predict(self, x: np.ndarray) -> list[tuple[str, ...]]:
        if self.multilabel:
            columns: dict[str, np.ndarray] = {}
            for label in self.labels:
                model = self._models.get(label)
                if model is None:
                    value = 1.0 if self._constants.get(label, False) else 0.0
                    columns[label] = np.full(x.shape[0], value)
                else:
                    columns[label] = model.predict_proba(x)[:, 1]
            out = []
            for i in range(x.shape[0]):
                out.append(
                    tuple(l for l in self.labels if columns[l][i] >= self.cfg.threshold)
                )
            return out
        if self._constant_class is not None:
            return [(self._constant_class,)] * x.shape[0]
        assert self._multiclass_model is not None
        return [(str(label),) for label in self._multiclass_model.predict(x)]


@dataclass
class VariantResult:
    name: str
    metrics: MetricsReport
    predictions: list[tuple[str, ...]]


@dataclass
class ComparisonReport:
    task: str
    label_space: tuple[str, ...]
    baseline: VariantResult
    fl: VariantResult
    golds: list[tuple[str, ...]]
    test_ids: list[str]
    test_texts: list[str]
    metadata: dict = field(default_factory=dict)

    def improvement(self, label: Optional[str] = None) -> Optional[float]:
        """Relative micro (or per-class) F1 improvement in percent."""
        if label is None:
            base, new = self.baseline.metrics.micro_f1, self.fl.metrics.micro_f1
        else:
            base = self.baseline.metrics.per_class[label].f1
            new = self.fl.metrics.per_class[label].f1
        return improvement_pct(base, new)

    def to_dict(self) -> dict:
        def variant(v: VariantResult) -> dict:
            return {
                "name": v.name,
                "micro_f1": v.metrics.micro_f1,
                "micro_precision": v.metrics.micro_precision,
                "micro_recall": v.metrics.micro_recall,
                "per_class_f1": {l: v.metrics.per_class[l].f1 for l in self.label_space},
            }

        return {
            "task": self.task,
            "label_space": list(self.label_space),
            "baseline": variant(self.baseline),
            "fl": variant(self.fl),
            "improvement_micro": self.improvement(),
            "improvement_per_class": {l: self.improvement(l) for l in self.label_space},
            "metadata": self.metadata,
        }


def improvement_pct(base: float, new: float) -> Optional[float]:
    """Relative improvement (new - base) / base in percent; None when base is 0."""
    if base == 0.0:
        return None
    return 100.0 * (new - base) / base


def _features(encoder: EncoderAdapter, texts: Sequence[str]) -> np.ndarray:
    return np.vstack([mean_pool(te).vector for te in encoder.encode(texts)])


def _hash_items(values: Sequence) -> str:
    digest = hashlib.sha256()
    for value in values:
        digest.update(json.dumps(value, sort_keys=True, ensure_ascii=False).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def run_comparison(
    task: TaskDataset,
    encoder: TrainableEncoderAdapter,
    triplets: Sequence[TripletRecord],
    train_cfg: TrainConfig,
    task_cfg: Optional[TaskRunConfig] = None,
) -> ComparisonReport:
    """Train and evaluate the baseline and FL variants on one dataset.

    Priority-style datasets use their provided splits; the others get a
    seeded stratified 80/20 split. Any training failure aborts the whole
    comparison.
    """
    task_cfg = task_cfg or TaskRunConfig()
    if not task.items:
        raise ValueError("task dataset is empty")

    provided = task.split_indices()
    if provided is not None:
        train_idx, test_idx = provided
        if not train_idx or not test_idx:
            raise ValueError("provided split tags leave one side empty")
    else:
        strata = [
            "|".join(sorted(item.labels)) if item.labels else "<none>" for item in task.items
        ]
        train_idx, test_idx = stratified_split(
            task.items, strata, task_cfg.train_fraction, task_cfg.split_seed
        )

    train_texts = [task.items[i].text for i in train_idx]
    train_labels = [task.items[i].labels for i in train_idx]
    test_texts = [task.items[i].text for i in test_idx]
    golds = [task.items[i].labels for i in test_idx]
    test_ids = [task.items[i].item_id for i in test_idx]

    baseline_encoder = encoder.clone()
    fl_encoder = encoder.clone()
    if task_cfg.fl_enabled:
        if not triplets:
            raise ValueError("FL variant requested but no triplets were provided")
        finetune(fl_encoder, triplets, train_cfg)

    mode = "multilabel" if task.multilabel else "multiclass"
    variants: dict[str, VariantResult] = {}
    for name, variant_encoder in (("baseline", baseline_encoder), ("fl", fl_encoder)):
        head = LinearHead(task.label_space, task.multilabel, task_cfg)
        head.fit(_features(variant_encoder, train_texts), train_labels)
        predictions = head.predict(_features(variant_encoder, test_texts))
        if task.multilabel:
            metrics = classification_metrics(golds, predictions, mode, task.label_space)
        else:
            metrics = classification_metrics(
                [g[0] for g in golds], [p[0] for p in predictions], mode, task.label_space
            )
        variants[name] = VariantResult(name, metrics, predictions)

    metadata = {
        "task_cfg": task_cfg.to_dict(),
        "train_cfg": train_cfg.to_dict(),
        "encoder": encoder.name,
        "n_train": len(train_idx),
        "n_test": len(test_idx),
        "dataset_hash": _hash_items([[i.item_id, i.text, list(i.labels)] for i in task.items]),
        "test_split_hash": _hash_items([[i, t] for i, t in zip(test_ids, test_texts)]),
        "n_triplets": len(triplets),
    }
    return ComparisonReport(
        task=task.task,
        label_space=task.label_space,
        baseline=variants["baseline"],
        fl=variants["fl"],
        golds=golds,
        test_ids=test_ids,
        test_texts=test_texts,
        metadata=metadata,
    )
