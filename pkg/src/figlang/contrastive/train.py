"""Adam-driven fine-tuning loop over shuffled triplet batches."""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from figlang.figdata.model import TripletRecord
from figlang.geom.encoders import EncoderAdapter, TrainableEncoderAdapter


class NotTrainableError(TypeError):
    """The adapter does not implement the trainable contract."""


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 3
    batch_size: int = 16
    learning_rate: float = 2e-5
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    similarity_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size < 1:
            raise ValueError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.similarity_scale <= 0:
            raise ValueError(f"similarity_scale must be positive, got {self.similarity_scale}")
        if not 0 <= self.beta1 < 1 or not 0 <= self.beta2 < 1:
            raise ValueError("Adam betas must lie in [0, 1)")

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "beta1": self.beta1,
            "beta2": self.beta2,
            "eps": self.eps,
            "similarity_scale": self.similarity_scale,
        }


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    mean_loss: float
    wall_time_s: float


@dataclass
class TrainingLog:
    """Per-epoch training record; loss values are bit-reproducible for
    deterministic adapters, wall times are environment noise."""

    encoder_name: str
    config: TrainConfig
    entries: list[EpochStats] = field(default_factory=list)

    @property
    def losses(self) -> list[float]:
        return [e.mean_loss for e in self.entries]

    def write_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(
                json.dumps(
                    {"encoder": self.encoder_name, "config": self.config.to_dict()},
                    sort_keys=True,
                )
                + "\n"
            )
            for e in self.entries:
                handle.write(
                    json.dumps(
                        {"epoch": e.epoch, "mean_loss": e.mean_loss, "wall_time": e.wall_time_s},
                        sort_keys=True,
                    )
                    + "\n"
                )


class Adam:
    """Standard Adam with bias correction; returns parameter deltas."""

    def __init__(self, cfg: TrainConfig) -> None:
        self.cfg = cfg
        self.m: dict[str, np.ndarray] = {}
        self.v: dict[str, np.ndarray] = {}
        self.t = 0

    def step(self, grads: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
        self.t += 1
        cfg = self.cfg
        deltas: dict[str, np.ndarray] = {}
        for name, grad in grads.items():
            if name not in self.m:
                self.m[name] = np.zeros_like(grad)
                self.v[name] = np.zeros_like(grad)
            self.m[name] = cfg.beta1 * self.m[name] + (1 - cfg.beta1) * grad
            self.v[name] = cfg.beta2 * self.v[name] + (1 - cfg.beta2) * grad * grad
            m_hat = self.m[name] / (1 - cfg.beta1**self.t)
            v_hat = self.v[name] / (1 - cfg.beta2**self.t)
            deltas[name] = -cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.eps)
        return deltas


def finetune(
    encoder: EncoderAdapter,
    triplets: Sequence[TripletRecord],
    cfg: TrainConfig,
) -> tuple[TrainableEncoderAdapter, TrainingLog]:
    """Run epochs of shuffled mini-batch Adam steps on a trainable adapter.

    The adapter is updated in place and returned with the training log.
    With a fixed seed and a deterministic adapter the per-epoch losses are
    bit-reproducible.
    """
    if not isinstance(encoder, TrainableEncoderAdapter) or not encoder.trainable:
        raise NotTrainableError(
            f"{getattr(encoder, 'name', type(encoder).__name__)} does not support training"
        )
    if not triplets:
        raise ValueError("finetune requires a non-empty triplet list")

    rng = random.Random(cfg.seed)
    adam = Adam(cfg)
    order = list(range(len(triplets)))
    log = TrainingLog(encoder_name=encoder.name, config=cfg)
    for epoch in range(1, cfg.epochs + 1):
        started = time.perf_counter()
        rng.shuffle(order)
        loss_sum = 0.0
        for start in range(0, len(order), cfg.batch_size):
            batch_ids = order[start : start + cfg.batch_size]
            batch = [
                (triplets[i].anchor, triplets[i].positive, triplets[i].negative)
                for i in batch_ids
            ]
            loss, grads = encoder.triplet_gradients(batch, cfg.similarity_scale)
            if not math.isfinite(loss):
                raise RuntimeError(f"non-finite loss at epoch {epoch}")
            loss_sum += loss * len(batch_ids)
            encoder.apply_update(adam.step(grads))
        log.entries.append(
            EpochStats(epoch, loss_sum / len(order), time.perf_counter() - started)
        )
    return encoder, log
