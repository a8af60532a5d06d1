"""Batch embedding normalization via a singular-value transform.

The batch matrix is column-centered, decomposed with a thin SVD, the
singular values are passed through the soft-exponential family, the matrix
is reconstructed, and rows are L2-normalized. With ``alpha == 0`` the
singular-value map is the identity, so the whole transform degenerates to a
no-op and the input is returned unchanged (centering and row scaling are
part of the non-trivial transform only).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger("figlang.geom")


@dataclass(frozen=True)
class SvtConfig:
    """Shape parameter and switches for the singular-value transform."""

    alpha: float = 0.001
    apply: bool = True
    re_add_mean: bool = False

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


def soft_exponential(alpha: float, s: np.ndarray) -> np.ndarray:
    """Soft-exponential map of singular values.

    f(0, s) = s; f(a, s) = (exp(a s) - 1)/a + a for a > 0;
    f(a, s) = -ln(1 - a (s + a))/a for a < 0.
    """
    s = np.asarray(s, dtype=np.float64)
    if alpha == 0.0:
        return s.copy()
    if alpha > 0.0:
        return (np.exp(alpha * s) - 1.0) / alpha + alpha
    arg = 1.0 - alpha * (s + alpha)
    if np.any(arg <= 0.0):
        logger.warning("soft-exponential argument clipped to stay in the log domain")
        arg = np.clip(arg, np.finfo(np.float64).tiny, None)
    return -np.log(arg) / alpha


def svt_normalize(batch: np.ndarray, cfg: SvtConfig) -> np.ndarray:
    """Normalize a batch (n x d) of pooled sentence vectors.

    Returns a new array of the same shape. Degenerate all-zero input is
    returned unchanged with a warning.
    """
    batch = np.asarray(batch, dtype=np.float64)
    if batch.ndim != 2 or batch.shape[0] < 1:
        raise ValueError(f"batch must be a non-empty n x d matrix, got shape {batch.shape}")
    if not cfg.apply or cfg.alpha == 0.0:
        return batch.copy()
    if not batch.any():
        logger.warning("svt_normalize received an all-zero batch; returning it unchanged")
        return batch.copy()
    means = batch.mean(axis=0, keepdims=True)
    centered = batch - means
    u, s, vt = np.linalg.svd(centered, full_matrices=False)
    transformed = u @ np.diag(soft_exponential(cfg.alpha, s)) @ vt
    if cfg.re_add_mean:
        transformed = transformed + means
    norms = np.linalg.norm(transformed, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return transformed / safe
