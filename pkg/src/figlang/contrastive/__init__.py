"""Triplet contrastive fine-tuning with the InfoNCE objective."""

from figlang.contrastive.loss import TripletEmbedding, batch_loss, info_nce, info_nce_from_sims
from figlang.contrastive.train import (
    Adam,
    EpochStats,
    NotTrainableError,
    TrainConfig,
    TrainingLog,
    finetune,
)

__all__ = [
    "TripletEmbedding",
    "info_nce",
    "info_nce_from_sims",
    "batch_loss",
    "TrainConfig",
    "TrainingLog",
    "EpochStats",
    "Adam",
    "NotTrainableError",
    "finetune",
]
