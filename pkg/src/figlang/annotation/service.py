"""FastAPI service exposing the annotation workflow.

Endpoints mirror the workflow stages; all mutations take a coarse lock so
concurrent HTTP requests serialize per-write while reads stay snapshot
consistent. Optionally the service generates DMS candidates itself right
after an EMS submission when constructed with an LLM client.
"""

from __future__ import annotations

import logging
import threading
from importlib import resources
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse, PlainTextResponse

from figlang.annotation import rules as rules_manifest
from figlang.annotation.schemas import (
    CandidatesRequest,
    DmsRequest,
    EmsRequest,
    GuidelinesResponse,
    ItemModel,
    ItemResponse,
    ReplayCheckResponse,
    RulesResponse,
    StatsResponse,
    TaskModel,
    TaskResponse,
    VerifyRequest,
)
from figlang.annotation.workflow import (
    AnnotationWorkflow,
    ConflictError,
    DmsSubmission,
    NotFoundError,
    ValidationFailure,
    Verdict,
    WorkflowError,
)
from figlang.figdata.dms import DmsGenerationError, LlmClientAdapter, generate_dms_candidates
from figlang.figdata.summary import dataset_stats

logger = logging.getLogger("figlang.annotation")


def _guideline(name: str) -> str:
    return resources.files("figlang.annotation").joinpath(f"assets/{name}").read_text(encoding="utf-8")


def create_app(
    workflow: AnnotationWorkflow,
    llm: Optional[LlmClientAdapter] = None,
    snapshot_path: Optional[str | Path] = None,
) -> FastAPI:
    app = FastAPI(title="figlang annotation service")
    lock = threading.Lock()

    @app.exception_handler(WorkflowError)
    async def workflow_error_handler(_, exc: WorkflowError):
        if isinstance(exc, NotFoundError):
            status = 404
        elif isinstance(exc, ConflictError):
            status = 409
        elif isinstance(exc, ValidationFailure):
            status = 422
        else:
            status = 400
        detail = {"detail": str(exc)}
        if exc.rule:
            detail["rule"] = exc.rule
        return JSONResponse(status_code=status, content=detail)

    def _auto_generate(item_id: str) -> None:
        if llm is None:
            return
        item, _ = workflow.get_item(item_id)
        try:
            candidates = generate_dms_candidates(item.__class__.from_dict(item.to_dict()), llm)
        except (DmsGenerationError, ValueError) as exc:
            logger.warning("auto DMS generation parked item %s: %s", item_id, exc)
            return
        workflow.attach_dms_candidates(item_id, candidates)

    @app.get("/tasks/next", response_model=TaskResponse)
    def next_task(annotator: str = Query(...), stage: Optional[str] = Query(default=None)):
        with lock:
            view = workflow.next_task(annotator, stage)
        if view is None:
            return TaskResponse(task=None)
        return TaskResponse(task=TaskModel.from_view(view))

    @app.post("/tasks/{task_id}/verify", response_model=ItemResponse)
    def submit_verify(task_id: str, request: VerifyRequest):
        verdicts = [
            Verdict(tuple(v.span), v.is_figurative, v.category, v.scope) for v in request.verdicts
        ]
        with lock:
            item = workflow.submit_verification(
                task_id, request.annotator, verdicts, request.expected_version
            )
            version = workflow.get_item(item.id)[1]
        return ItemResponse(item=ItemModel.from_item(item, version))

    @app.post("/tasks/{task_id}/ems", response_model=ItemResponse)
    def submit_ems(task_id: str, request: EmsRequest):
        with lock:
            item = workflow.submit_ems(
                task_id, request.annotator, request.ems, request.expected_version
            )
            _auto_generate(item.id)
            version = workflow.get_item(item.id)[1]
            item = workflow.get_item(item.id)[0]
        return ItemResponse(item=ItemModel.from_item(item, version))

    @app.post("/tasks/{task_id}/dms", response_model=ItemResponse)
    def submit_dms(task_id: str, request: DmsRequest):
        submission = DmsSubmission(request.annotator, request.choice, request.custom_text)
        with lock:
            item = workflow.submit_dms_selection(
                task_id, request.annotator, submission, request.expected_version
            )
            version = workflow.get_item(item.id)[1]
        return ItemResponse(item=ItemModel.from_item(item, version))

    @app.post("/tasks/{task_id}/adjudicate", response_model=ItemResponse)
    def submit_adjudication(task_id: str, request: DmsRequest):
        submission = DmsSubmission(request.annotator, request.choice, request.custom_text)
        with lock:
            item = workflow.resolve_adjudication(
                task_id, request.annotator, submission, request.expected_version
            )
            version = workflow.get_item(item.id)[1]
        return ItemResponse(item=ItemModel.from_item(item, version))

    @app.post("/items/{item_id}/dms-candidates", response_model=ItemResponse)
    def attach_candidates(item_id: str, request: CandidatesRequest):
        with lock:
            item = workflow.attach_dms_candidates(item_id, request.candidates)
            version = workflow.get_item(item.id)[1]
        return ItemResponse(item=ItemModel.from_item(item, version))

    @app.get("/items")
    def list_items(status: Optional[str] = Query(default=None)):
        with lock:
            ids = [
                item.id for item in workflow.items() if status is None or item.status == status
            ]
        return {"items": ids}

    @app.get("/items/{item_id}", response_model=ItemResponse)
    def get_item(item_id: str):
        with lock:
            item, version = workflow.get_item(item_id)
        return ItemResponse(item=ItemModel.from_item(item, version))

    @app.get("/stats", response_model=StatsResponse)
    def stats():
        with lock:
            return StatsResponse(
                status_counts=workflow.status_counts(),
                open_adjudications=len(workflow.open_adjudications()),
                disagreement_count=workflow.disagreement_count,
                adjudication_count=workflow.adjudication_count,
                dataset=dataset_stats(workflow.items()).to_dict(),
                event_count=len(workflow.events),
            )

    @app.get("/rules", response_model=RulesResponse)
    def rules():
        return RulesResponse(rules=list(rules_manifest.RULE_IDS))

    @app.get("/guidelines", response_model=GuidelinesResponse)
    def guidelines():
        return GuidelinesResponse(
            verify=_guideline("guideline_verify.txt"),
            ems=_guideline("guideline_ems.txt"),
            dms_select=_guideline("guideline_dms_select.txt"),
        )

    @app.get("/replay-check", response_model=ReplayCheckResponse)
    def replay_check():
        with lock:
            identical = workflow.replay_snapshot() == workflow.dataset_snapshot()
            return ReplayCheckResponse(identical=identical, events=len(workflow.events))

    @app.get("/export", response_class=PlainTextResponse)
    def export_dataset():
        with lock:
            return workflow.dataset_snapshot()

    @app.post("/snapshot")
    def snapshot():
        if snapshot_path is None:
            return JSONResponse(status_code=400, content={"detail": "no snapshot path configured"})
        with lock:
            Path(snapshot_path).write_text(workflow.dataset_snapshot(), encoding="utf-8")
        return {"written": str(snapshot_path)}

    return app
