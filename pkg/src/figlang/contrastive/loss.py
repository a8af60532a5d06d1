"""InfoNCE loss over (anchor, positive, negative) sentence embeddings.

loss = -log(e^{s_p} / (e^{s_p} + e^{s_n})) with s_* the scaled cosine
similarities; evaluated in log-sum-exp form, so large scales stay stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from figlang.figdata.model import TripletRecord
from figlang.geom.encoders import EncoderAdapter
from figlang.geom.pooling import SentenceVector, cosine, mean_pool


@dataclass
class TripletEmbedding:
    """Embedded anchor/positive/negative, all of one dimension."""

    a: SentenceVector
    p: SentenceVector
    n: SentenceVector

    def __post_init__(self) -> None:
        dims = {self.a.vector.shape[0], self.p.vector.shape[0], self.n.vector.shape[0]}
        if len(dims) != 1:
            raise ValueError(f"triplet embedding dimensions differ: {sorted(dims)}")


def info_nce_from_sims(sim_pos: float, sim_neg: float, scale: float = 1.0) -> float:
    """InfoNCE from precomputed similarities: log(1 + e^{scale (s_n - s_p)})."""
    return float(np.logaddexp(0.0, scale * (sim_neg - sim_pos)))


def info_nce(t: TripletEmbedding, scale: float = 1.0) -> float:
    """InfoNCE of one embedded triplet; raises on zero vectors."""
    return info_nce_from_sims(cosine(t.a, t.p), cosine(t.a, t.n), scale)


def batch_loss(
    triplets: Sequence[TripletRecord], encoder: EncoderAdapter, scale: float = 1.0
) -> float:
    """Mean InfoNCE over a batch, embedding all texts in one encoder call.

    This is the evaluation-side forward pass; during training the gradient
    of the same quantity flows through the adapter's update contract (see
    ``figlang.contrastive.train.finetune``).
    """
    if not triplets:
        raise ValueError("batch_loss requires a non-empty batch")
    texts: list[str] = []
    for t in triplets:
        texts.extend((t.anchor, t.positive, t.negative))
    pooled = [mean_pool(te) for te in encoder.encode(texts)]
    total = 0.0
    for i in range(len(triplets)):
        emb = TripletEmbedding(pooled[3 * i], pooled[3 * i + 1], pooled[3 * i + 2])
        total += info_nce(emb, scale)
    return total / len(triplets)
