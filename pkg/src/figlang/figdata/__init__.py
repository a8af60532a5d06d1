"""Annotated figurative-language dataset: records, storage, DMS generation, triplets."""

from figlang.figdata.model import (
    STATUS_ORDER,
    AnnotatedSentence,
    DatasetStats,
    FigurativeExpression,
    TripletRecord,
    status_rank,
)
from figlang.figdata.store import SchemaError, load_dataset, load_triplets, save_dataset, save_triplets
from figlang.figdata.summary import dataset_stats
from figlang.figdata.triplets import build_triplets
from figlang.figdata.dms import (
    DmsGenerationError,
    HttpLlmClient,
    LlmClientAdapter,
    LlmError,
    StubLlmClient,
    TranscriptRecorder,
    TranscriptReplayClient,
    generate_dms_candidates,
)

__all__ = [
    "FigurativeExpression",
    "AnnotatedSentence",
    "TripletRecord",
    "DatasetStats",
    "STATUS_ORDER",
    "status_rank",
    "SchemaError",
    "load_dataset",
    "save_dataset",
    "load_triplets",
    "save_triplets",
    "dataset_stats",
    "build_triplets",
    "LlmClientAdapter",
    "LlmError",
    "DmsGenerationError",
    "HttpLlmClient",
    "StubLlmClient",
    "TranscriptReplayClient",
    "TranscriptRecorder",
    "generate_dms_candidates",
]
