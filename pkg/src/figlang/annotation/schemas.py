"""Pydantic request/response models for the annotation HTTP API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from figlang.annotation.workflow import TaskView
from figlang.figdata.model import AnnotatedSentence


class ExpressionModel(BaseModel):
    surface: str
    span: tuple[int, int]
    category: str
    scope: str
    verified: bool = False


class ItemModel(BaseModel):
    id: str
    original: str
    expressions: list[ExpressionModel]
    ems: Optional[str] = None
    dms: Optional[str] = None
    dms_candidates: list[str] = Field(default_factory=list)
    dms_choice: Optional[str] = None
    status: str
    version: int

    @classmethod
    def from_item(cls, item: AnnotatedSentence, version: int) -> "ItemModel":
        return cls(
            id=item.id,
            original=item.original,
            expressions=[
                ExpressionModel(
                    surface=e.surface, span=e.span, category=e.category,
                    scope=e.scope, verified=e.verified,
                )
                for e in item.expressions
            ],
            ems=item.ems,
            dms=item.dms,
            dms_candidates=list(item.dms_candidates),
            dms_choice=item.dms_choice,
            status=item.status,
            version=version,
        )


class TaskModel(BaseModel):
    task_id: str
    item_id: str
    stage: str
    assignee: str
    lease_expiry: float
    item: ItemModel

    @classmethod
    def from_view(cls, view: TaskView) -> "TaskModel":
        return cls(
            task_id=view.task_id,
            item_id=view.item_id,
            stage=view.stage,
            assignee=view.assignee,
            lease_expiry=view.lease_expiry,
            item=ItemModel.from_item(view.item, view.version),
        )


class TaskResponse(BaseModel):
    task: Optional[TaskModel] = None


class VerdictModel(BaseModel):
    span: tuple[int, int]
    is_figurative: bool
    category: Optional[str] = None
    scope: Optional[str] = None


class VerifyRequest(BaseModel):
    annotator: str
    verdicts: list[VerdictModel]
    expected_version: Optional[int] = None


class EmsRequest(BaseModel):
    annotator: str
    ems: str
    expected_version: Optional[int] = None


class DmsRequest(BaseModel):
    annotator: str
    choice: Literal["c1", "c2", "c3", "c4", "none"]
    custom_text: Optional[str] = None
    expected_version: Optional[int] = None


class CandidatesRequest(BaseModel):
    candidates: list[str] = Field(min_length=4, max_length=4)


class ItemResponse(BaseModel):
    item: ItemModel


class StatsResponse(BaseModel):
    status_counts: dict[str, int]
    open_adjudications: int
    disagreement_count: int
    adjudication_count: int
    dataset: dict
    event_count: int


class RulesResponse(BaseModel):
    rules: list[str]


class GuidelinesResponse(BaseModel):
    verify: str
    ems: str
    dms_select: str


class ReplayCheckResponse(BaseModel):
    identical: bool
    events: int
