"""Sentence-vector geometry: pooling, anisotropy normalization, similarity evaluation."""

from figlang.geom.pooling import SentenceVector, TokenEmbeddings, cosine, cosine_similarity, mean_pool
from figlang.geom.svt import SvtConfig, svt_normalize
from figlang.geom.encoders import (
    BagOfWordsEncoder,
    EncoderAdapter,
    EncoderError,
    LinearVocabEncoder,
    TrainableEncoderAdapter,
    get_encoder,
)
from figlang.geom.rq1 import RQ1Report, SimilarityComparison, evaluate_rq1

__all__ = [
    "TokenEmbeddings",
    "SentenceVector",
    "mean_pool",
    "cosine",
    "cosine_similarity",
    "SvtConfig",
    "svt_normalize",
    "EncoderAdapter",
    "TrainableEncoderAdapter",
    "EncoderError",
    "BagOfWordsEncoder",
    "LinearVocabEncoder",
    "get_encoder",
    "evaluate_rq1",
    "RQ1Report",
    "SimilarityComparison",
]
