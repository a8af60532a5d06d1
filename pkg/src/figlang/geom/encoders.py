"""Encoder adapters: the text -> token-embedding contract and toy implementations.

Real transformer encoders plug in through the same interface (see
``figlang.geom.hf`` for an optional Hugging Face adapter). The toy encoders
here are deterministic and CPU-cheap; they drive the evaluation pipeline and
the contrastive trainer at desk scale.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from typing import Iterable, Sequence

import numpy as np

from figlang.geom.pooling import TokenEmbeddings, cosine_similarity


class EncoderError(RuntimeError):
    """Raised when an adapter cannot embed a text."""


def tokenize(text: str) -> list[str]:
    """Lowercased whitespace tokens; the shared convention for toy encoders."""
    return text.lower().split()


class EncoderAdapter(ABC):
    """Contract: a batch of texts in, one token-embedding matrix per text out."""

    name: str = "encoder"

    @abstractmethod
    def encode(self, texts: Sequence[str]) -> list[TokenEmbeddings]:
        raise NotImplementedError

    @property
    def trainable(self) -> bool:
        return False


class TrainableEncoderAdapter(EncoderAdapter):
    """Encoder whose parameters can be updated by the contrastive trainer.

    The trainer computes Adam steps from the gradients this adapter reports
    and hands the resulting parameter deltas back through ``apply_update``.
    """

    @property
    def trainable(self) -> bool:
        return True

    @abstractmethod
    def parameters(self) -> dict[str, np.ndarray]:
        raise NotImplementedError

    @abstractmethod
    def triplet_gradients(
        self, batch: Sequence[tuple[str, str, str]], scale: float = 1.0
    ) -> tuple[float, dict[str, np.ndarray]]:
        """Mean InfoNCE loss over the batch and its gradient per parameter."""
        raise NotImplementedError

    @abstractmethod
    def apply_update(self, deltas: dict[str, np.ndarray]) -> None:
        raise NotImplementedError

    @abstractmethod
    def clone(self) -> "TrainableEncoderAdapter":
        raise NotImplementedError


class BagOfWordsEncoder(EncoderAdapter):
    """One-hot token embeddings over a vocabulary fitted per batch.

    Mean pooling then yields the normalized term histogram, so two texts
    with disjoint token sets are exactly orthogonal. Vocabulary indices are
    assigned in first-encounter order within each ``encode`` call; cosine
    values are invariant to that ordering.
    """

    name = "bow"

    def encode(self, texts: Sequence[str]) -> list[TokenEmbeddings]:
        token_lists = [tokenize(t) for t in texts]
        vocab: dict[str, int] = {}
        for tokens in token_lists:
            for tok in tokens:
                if tok not in vocab:
                    vocab[tok] = len(vocab)
        dim = max(len(vocab), 1)
        out: list[TokenEmbeddings] = []
        for text, tokens in zip(texts, token_lists):
            if not tokens:
                raise EncoderError(f"cannot embed empty text: {text!r}")
            matrix = np.zeros((len(tokens), dim), dtype=np.float64)
            for row, tok in enumerate(tokens):
                matrix[row, vocab[tok]] = 1.0
            out.append(TokenEmbeddings(matrix, np.ones(len(tokens), dtype=bool)))
        return out


class LinearVocabEncoder(TrainableEncoderAdapter):
    """Trainable lookup-table encoder: one dense vector per vocabulary token.

    ``fit`` freezes the vocabulary (sorted for determinism) and draws the
    embedding table from a seeded normal distribution; unseen tokens share a
    reserved row. Gradients of the triplet InfoNCE loss are computed
    analytically through the mean-pool and cosine chain.
    """

    name = "linear"

    def __init__(self, dim: int = 16, seed: int = 0) -> None:
        if dim < 1:
            raise ValueError("embedding dimension must be positive")
        self.dim = dim
        self.seed = seed
        self.vocab: dict[str, int] = {}
        self.embeddings = np.zeros((1, dim), dtype=np.float64)
        self._fitted = False

    def fit(self, texts: Iterable[str]) -> "LinearVocabEncoder":
        tokens = sorted({tok for text in texts for tok in tokenize(text)})
        self.vocab = {tok: i for i, tok in enumerate(tokens)}
        rng = np.random.default_rng(self.seed)
        # Last row is the shared unknown-token vector.
        self.embeddings = rng.normal(0.0, 0.5, size=(len(tokens) + 1, self.dim))
        self._fitted = True
        return self

    def _ids(self, text: str) -> list[int]:
        unk = len(self.vocab)
        ids = [self.vocab.get(tok, unk) for tok in tokenize(text)]
        if not ids:
            raise EncoderError(f"cannot embed empty text: {text!r}")
        return ids

    def encode(self, texts: Sequence[str]) -> list[TokenEmbeddings]:
        if not self._fitted:
            raise EncoderError("LinearVocabEncoder used before fit()")
        out = []
        for text in texts:
            ids = self._ids(text)
            matrix = self.embeddings[ids]
            out.append(TokenEmbeddings(matrix, np.ones(len(ids), dtype=bool)))
        return out

    def sentence_vector(self, text: str) -> np.ndarray:
        return self.embeddings[self._ids(text)].mean(axis=0)

    def parameters(self) -> dict[str, np.ndarray]:
        return {"embeddings": self.embeddings}

    @staticmethod
    def _cosine_grads(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
        """cos(a, b) and its gradients with respect to a and b."""
        na = float(np.linalg.norm(a))
        nb = float(np.linalg.norm(b))
        if na == 0.0 or nb == 0.0:
            raise EncoderError("zero sentence vector during gradient computation")
        cos = float(np.dot(a, b) / (na * nb))
        grad_a = b / (na * nb) - cos * a / (na * na)
        grad_b = a / (na * nb) - cos * b / (nb * nb)
        return cos, grad_a, grad_b

    def triplet_gradients(
        self, batch: Sequence[tuple[str, str, str]], scale: float = 1.0
    ) -> tuple[float, dict[str, np.ndarray]]:
        if not batch:
            raise ValueError("empty triplet batch")
        grad = np.zeros_like(self.embeddings)
        total_loss = 0.0
        for anchor, positive, negative in batch:
            ids_a, ids_p, ids_n = self._ids(anchor), self._ids(positive), self._ids(negative)
            a = self.embeddings[ids_a].mean(axis=0)
            p = self.embeddings[ids_p].mean(axis=0)
            n = self.embeddings[ids_n].mean(axis=0)
            sim_p, d_sp_a, d_sp_p = self._cosine_grads(a, p)
            sim_n, d_sn_a, d_sn_n = self._cosine_grads(a, n)
            x = scale * (sim_n - sim_p)
            total_loss += float(np.logaddexp(0.0, x))
            sigma = 1.0 / (1.0 + np.exp(-x))  # dL/dx
            d_a = sigma * scale * (d_sn_a - d_sp_a)
            d_p = -sigma * scale * d_sp_p
            d_n = sigma * scale * d_sn_n
            for ids, vec in ((ids_a, d_a), (ids_p, d_p), (ids_n, d_n)):
                contribution = vec / len(ids)
                for token_id in ids:
                    grad[token_id] += contribution
        count = len(batch)
        return total_loss / count, {"embeddings": grad / count}

    def apply_update(self, deltas: dict[str, np.ndarray]) -> None:
        self.embeddings = self.embeddings + deltas["embeddings"]

    def clone(self) -> "LinearVocabEncoder":
        twin = LinearVocabEncoder(self.dim, self.seed)
        twin.vocab = dict(self.vocab)
        twin.embeddings = self.embeddings.copy()
        twin._fitted = self._fitted
        return twin

    def mean_similarity(self, pairs: Sequence[tuple[str, str]]) -> float:
        """Mean cosine over text pairs; used to track training progress."""
        values = [
            cosine_similarity(self.sentence_vector(a), self.sentence_vector(b)) for a, b in pairs
        ]
        return float(np.mean(values))

    def save(self, path: str) -> None:
        np.savez(
            path,
            embeddings=self.embeddings,
            vocab=json.dumps(self.vocab),
            dim=self.dim,
            seed=self.seed,
        )

    @classmethod
    def load(cls, path: str) -> "LinearVocabEncoder":
        data = np.load(path, allow_pickle=False)
        enc = cls(int(data["dim"]), int(data["seed"]))
        enc.vocab = {k: int(v) for k, v in json.loads(str(data["vocab"])).items()}
        enc.embeddings = np.asarray(data["embeddings"], dtype=np.float64)
        enc._fitted = True
        return enc


def get_encoder(spec: str) -> EncoderAdapter:
    """Build an encoder from a CLI spec like ``bow``, ``linear:dim=8,seed=3``,
    or ``hf:bert-base-uncased``."""
    kind, _, arg = spec.partition(":")
    if kind in ("bow", "toy"):
        return BagOfWordsEncoder()
    if kind == "linear":
        kwargs: dict[str, int] = {}
        if arg:
            for part in arg.split(","):
                key, _, value = part.partition("=")
                kwargs[key.strip()] = int(value)
        return LinearVocabEncoder(**kwargs)
    if kind == "hf":
        from figlang.geom.hf import HFEncoderAdapter

        return HFEncoderAdapter(arg or "bert-base-uncased")
    raise ValueError(f"unknown encoder spec: {spec!r}")
