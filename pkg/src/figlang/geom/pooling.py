"""Token-matrix pooling and cosine similarity."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TokenEmbeddings:
    """Per-token embedding matrix (T x d) with a boolean attention mask."""

    matrix: np.ndarray
    attention_mask: np.ndarray

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.float64)
        self.attention_mask = np.asarray(self.attention_mask, dtype=bool)
        if self.matrix.ndim != 2 or self.matrix.shape[1] < 1:
            raise ValueError(f"token matrix must be T x d with d > 0, got shape {self.matrix.shape}")
        if self.attention_mask.shape != (self.matrix.shape[0],):
            raise ValueError("attention mask length must equal the token count")
        if not self.attention_mask.any():
            raise ValueError("at least one token must be unmasked")


@dataclass
class SentenceVector:
    """A pooled sentence embedding."""

    vector: np.ndarray
    source_text: str = field(default="")

    def __post_init__(self) -> None:
        self.vector = np.asarray(self.vector, dtype=np.float64)
        if self.vector.ndim != 1:
            raise ValueError(f"sentence vector must be 1-D, got shape {self.vector.shape}")
        if not np.all(np.isfinite(self.vector)):
            raise ValueError("sentence vector contains non-finite entries")


def mean_pool(te: TokenEmbeddings) -> SentenceVector:
    """Arithmetic mean of the unmasked token rows."""
    rows = te.matrix[te.attention_mask]
    if rows.shape[0] == 0:
        raise ValueError("cannot pool an all-masked token matrix")
    return SentenceVector(rows.mean(axis=0))


_ONE_SNAP = 1e-12


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two vectors.

    Clamped to [-1, 1] against floating-point drift; values within an
    ulp-scale tolerance of the bounds snap to exactly +/-1, so identical
    (or positively rescaled) vectors compare as exactly 1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity undefined for zero vectors")
    value = float(np.dot(a, b) / (na * nb))
    if value > 1.0 - _ONE_SNAP:
        return 1.0
    if value < -1.0 + _ONE_SNAP:
        return -1.0
    return value


def cosine(u: SentenceVector, v: SentenceVector) -> float:
    """Cosine similarity between two pooled sentence vectors."""
    return cosine_similarity(u.vector, v.vector)
