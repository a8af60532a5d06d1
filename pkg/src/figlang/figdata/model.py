"""Domain records for the annotated figurative-language dataset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

CATEGORIES = ("metaphor", "idiom")
SCOPES = ("se_specific", "general")

# Workflow states in advancement order; "rejected" is a terminal side state.
STATUS_ORDER = (
    "screened",
    "verified",
    "ems_done",
    "dms_candidates_ready",
    "dms_selected",
    "adjudicated",
)
REJECTED = "rejected"

DMS_CHOICES = ("c1", "c2", "c3", "c4", "none_custom")


def status_rank(status: str) -> int:
    """Position of a status in the advancement order; rejected ranks -1."""
    if status == REJECTED:
        return -1
    return STATUS_ORDER.index(status)


@dataclass
class FigurativeExpression:
    """A (candidate or verified) figurative span inside one sentence."""

    surface: str
    span: tuple[int, int]
    category: str
    scope: str
    verified: bool = False

    def __post_init__(self) -> None:
        self.span = (int(self.span[0]), int(self.span[1]))
        if self.span[0] < 0 or self.span[1] <= self.span[0]:
            raise ValueError(f"invalid span {self.span} for {self.surface!r}")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if self.scope not in SCOPES:
            raise ValueError(f"unknown scope {self.scope!r}")

    def to_dict(self) -> dict:
        return {
            "surface": self.surface,
            "span": list(self.span),
            "category": self.category,
            "scope": self.scope,
            "verified": self.verified,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FigurativeExpression":
        return cls(
            surface=data["surface"],
            span=(data["span"][0], data["span"][1]),
            category=data["category"],
            scope=data["scope"],
            verified=bool(data.get("verified", False)),
        )


@dataclass
class AnnotatedSentence:
    """One original sentence with its annotation workflow state.

    ``ems`` is the human-authored equivalent-meaning rephrasing; ``dms`` the
    selected different-meaning sentence. ``dms_candidates`` holds the four
    generated candidates in strategy order (two literal-use, then two
    replacement).
    """

    id: str
    original: str
    expressions: list[FigurativeExpression] = field(default_factory=list)
    ems: Optional[str] = None
    dms: Optional[str] = None
    dms_candidates: list[str] = field(default_factory=list)
    dms_choice: Optional[str] = None
    status: str = "screened"
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.status not in STATUS_ORDER and self.status != REJECTED:
            raise ValueError(f"unknown status {self.status!r}")
        if self.dms_choice is not None and self.dms_choice not in DMS_CHOICES:
            raise ValueError(f"unknown dms_choice {self.dms_choice!r}")
        if not self.original.strip():
            raise ValueError("original sentence must be non-empty")

    def verified_expressions(self) -> list[FigurativeExpression]:
        return [e for e in self.expressions if e.verified]

    def scope_category(self) -> Optional[str]:
        """``se_specific`` / ``general`` / ``both`` over verified expressions."""
        scopes = {e.scope for e in self.verified_expressions()}
        if not scopes:
            return None
        if scopes == {"se_specific"}:
            return "se_specific"
        if scopes == {"general"}:
            return "general"
        return "both"

    def rank(self) -> int:
        return status_rank(self.status)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "original": self.original,
            "expressions": [e.to_dict() for e in self.expressions],
            "ems": self.ems,
            "dms": self.dms,
            "dms_candidates": list(self.dms_candidates),
            "dms_choice": self.dms_choice,
            "status": self.status,
            "provenance": dict(self.provenance),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotatedSentence":
        return cls(
            id=data["id"],
            original=data["original"],
            expressions=[FigurativeExpression.from_dict(e) for e in data.get("expressions", [])],
            ems=data.get("ems"),
            dms=data.get("dms"),
            dms_candidates=list(data.get("dms_candidates", [])),
            dms_choice=data.get("dms_choice"),
            status=data.get("status", "screened"),
            provenance=dict(data.get("provenance", {})),
        )


@dataclass(frozen=True)
class TripletRecord:
    """Contrastive (anchor, positive, negative) sentence triple."""

    anchor: str
    positive: str
    negative: str
    source_id: str
    orientation: str  # orig_anchor | ems_anchor

    def __post_init__(self) -> None:
        if self.orientation not in ("orig_anchor", "ems_anchor"):
            raise ValueError(f"unknown orientation {self.orientation!r}")
        if self.anchor == self.negative or self.positive == self.negative:
            raise ValueError(f"degenerate triplet for source {self.source_id}")

    def to_dict(self) -> dict:
        return {
            "anchor": self.anchor,
            "positive": self.positive,
            "negative": self.negative,
            "source_id": self.source_id,
            "orientation": self.orientation,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TripletRecord":
        return cls(
            anchor=data["anchor"],
            positive=data["positive"],
            negative=data["negative"],
            source_id=data["source_id"],
            orientation=data["orientation"],
        )


@dataclass(frozen=True)
class DatasetStats:
    """Aggregate counts over an annotated dataset."""

    n_sentences: int
    n_metaphor_sentences: int
    n_idiom_sentences: int
    n_rejected: int
    n_unique_expressions: int
    n_se_specific: int
    n_general: int

    def to_dict(self) -> dict:
        return {
            "n_sentences": self.n_sentences,
            "n_metaphor_sentences": self.n_metaphor_sentences,
            "n_idiom_sentences": self.n_idiom_sentences,
            "n_rejected": self.n_rejected,
            "n_unique_expressions": self.n_unique_expressions,
            "n_se_specific": self.n_se_specific,
            "n_general": self.n_general,
        }
