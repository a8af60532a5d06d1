"""Comment fetching, sentence splitting, filtering, and candidate screening."""

from figlang.ingest.github import (
    AuthenticationError,
    FetchResult,
    GithubCommentClient,
    IngestError,
    RawComment,
    ReplayTransport,
    UnknownRepoError,
)
from figlang.ingest.sentences import (
    Sentence,
    filter_short,
    preprocess_se_text,
    split_sentences,
    split_text,
)
from figlang.ingest.screen import (
    CandidateSentence,
    CandidateSpan,
    DetectorAdapter,
    DetectorResult,
    KeywordAffectScreen,
    LexiconDetector,
    ScriptedDetector,
    screen_candidates,
)

__all__ = [
    "RawComment",
    "FetchResult",
    "GithubCommentClient",
    "ReplayTransport",
    "IngestError",
    "AuthenticationError",
    "UnknownRepoError",
    "Sentence",
    "split_sentences",
    "split_text",
    "filter_short",
    "preprocess_se_text",
    "CandidateSpan",
    "CandidateSentence",
    "DetectorAdapter",
    "DetectorResult",
    "LexiconDetector",
    "KeywordAffectScreen",
    "ScriptedDetector",
    "screen_candidates",
]
