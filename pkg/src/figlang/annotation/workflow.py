"""Annotation workflow engine: leases, stage transitions, adjudication.

Items advance screened -> verified -> ems_done -> dms_candidates_ready ->
dms_selected (-> adjudicated when the two selection submissions disagree);
rejection at verification is terminal. The engine enforces the order, hands
out leased tasks FIFO by item id, and appends every mutation to an event
log whose replay reconstructs the dataset exactly.
"""

from __future__ import annotations

import copy
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from figlang.annotation.events import EventLog
from figlang.figdata.model import AnnotatedSentence, FigurativeExpression
from figlang.figdata.store import dumps_dataset

VERIFY = "verify"
EMS = "ems"
DMS_SELECT = "dms_select"
ADJUDICATE = "adjudicate"
STAGES = (VERIFY, EMS, DMS_SELECT, ADJUDICATE)

CANDIDATE_CHOICES = ("c1", "c2", "c3", "c4")
DMS_REQUIRED_SUBMISSIONS = 2


class WorkflowError(Exception):
    """Base class; ``rule`` names the violated manifest rule when relevant."""

    def __init__(self, message: str, rule: Optional[str] = None) -> None:
        super().__init__(message)
        self.rule = rule


class NotFoundError(WorkflowError):
    pass


class ConflictError(WorkflowError):
    pass


class ValidationFailure(WorkflowError):
    pass


@dataclass(frozen=True)
class Verdict:
    """One annotator decision about one candidate span."""

    span: tuple[int, int]
    is_figurative: bool
    category: Optional[str] = None
    scope: Optional[str] = None


@dataclass(frozen=True)
class DmsSubmission:
    annotator: str
    choice: str  # c1..c4 | none
    custom_text: Optional[str] = None

    def validate(self) -> None:
        if self.choice not in CANDIDATE_CHOICES + ("none",):
            raise ValidationFailure(f"unknown choice {self.choice!r}")
        if self.choice == "none":
            if not (self.custom_text or "").strip():
                raise ValidationFailure(
                    "choice 'none' requires a custom sentence",
                    rule="dms_choice_none_requires_custom_text",
                )
        elif self.custom_text:
            raise ValidationFailure(
                "custom text is only allowed with choice 'none'",
                rule="dms_choice_candidate_forbids_custom_text",
            )

    def agrees_with(self, other: "DmsSubmission") -> bool:
        if self.choice != other.choice:
            return False
        if self.choice == "none":
            return (self.custom_text or "").strip() == (other.custom_text or "").strip()
        return True

    def resolved_dms(self, candidates: list[str]) -> tuple[str, str]:
        """(dms text, dms_choice value) this submission selects."""
        if self.choice == "none":
            return (self.custom_text or "").strip(), "none_custom"
        index = CANDIDATE_CHOICES.index(self.choice)
        if index >= len(candidates):
            raise ValidationFailure(f"item has no candidate {self.choice}")
        return candidates[index], self.choice


@dataclass
class Lease:
    task_id: str
    item_id: str
    stage: str
    assignee: str
    expires_at: float


@dataclass
class TaskView:
    task_id: str
    item_id: str
    stage: str
    assignee: str
    lease_expiry: float
    item: AnnotatedSentence
    version: int


@dataclass
class _ItemState:
    item: AnnotatedSentence
    version: int = 0
    dms_submissions: dict[str, DmsSubmission] = field(default_factory=dict)
    adjudication_open: bool = False
    adjudicated_by: Optional[str] = None


class AnnotationWorkflow:
    """In-memory workflow over one annotated dataset, with an event log."""

    def __init__(
        self,
        items: Iterable[AnnotatedSentence],
        annotators: Iterable[str],
        lease_seconds: float = 1800.0,
        clock: Callable[[], float] = time.time,
        event_log: Optional[EventLog] = None,
    ) -> None:
        self.states: dict[str, _ItemState] = {}
        for item in items:
            if item.id in self.states:
                raise ValueError(f"duplicate item id {item.id}")
            self.states[item.id] = _ItemState(item=item)
        self.initial_items = {sid: copy.deepcopy(st.item) for sid, st in self.states.items()}
        self.annotators = set(annotators)
        if not self.annotators:
            raise ValueError("at least one annotator must be registered")
        self.lease_seconds = lease_seconds
        self.clock = clock
        self.events = event_log if event_log is not None else EventLog(clock=clock)
        self.leases: dict[str, Lease] = {}
        self.disagreement_count = 0
        self.adjudication_count = 0
        if len(self.events):
            self._replay_events(self.events.records)

    # ------------------------------------------------------------------ tasks

    def _check_annotator(self, annotator: str) -> None:
        if annotator not in self.annotators:
            raise ValidationFailure(f"unknown annotator {annotator!r}")

    def _active_leases(self, item_id: str, stage: str) -> list[Lease]:
        now = self.clock()
        return [
            lease
            for lease in self.leases.values()
            if lease.item_id == item_id and lease.stage == stage and lease.expires_at > now
        ]

    def _stage_pending(self, state: _ItemState, stage: str, annotator: str) -> bool:
        item = state.item
        if stage == VERIFY:
            return item.status == "screened"
        if stage == EMS:
            return item.status == "verified"
        if stage == DMS_SELECT:
            return (
                item.status == "dms_candidates_ready"
                and not state.adjudication_open
                and annotator not in state.dms_submissions
                and len(state.dms_submissions) < DMS_REQUIRED_SUBMISSIONS
            )
        if stage == ADJUDICATE:
            return state.adjudication_open
        raise ValidationFailure(f"unknown stage {stage!r}")

    def _available(self, state: _ItemState, stage: str, annotator: str) -> bool:
        if not self._stage_pending(state, stage, annotator):
            return False
        active = self._active_leases(state.item.id, stage)
        mine = [lease for lease in active if lease.assignee == annotator]
        if mine:
            return True  # re-offer the holder's own lease
        if stage == DMS_SELECT:
            # Capacity two, distinct annotators: count other holders plus
            # submissions already in.
            occupied = len(active) + len(state.dms_submissions)
            return occupied < DMS_REQUIRED_SUBMISSIONS
        return not active

    def next_task(self, annotator: str, stage: Optional[str] = None) -> Optional[TaskView]:
        """Lease the first pending task, FIFO by item id within each stage."""
        self._check_annotator(annotator)
        stages = (stage,) if stage else STAGES
        for current_stage in stages:
            if current_stage not in STAGES:
                raise ValidationFailure(f"unknown stage {current_stage!r}")
            for item_id in sorted(self.states):
                state = self.states[item_id]
                if not self._available(state, current_stage, annotator):
                    continue
                task_id = f"{current_stage}:{item_id}:{annotator}"
                lease = Lease(
                    task_id=task_id,
                    item_id=item_id,
                    stage=current_stage,
                    assignee=annotator,
                    expires_at=self.clock() + self.lease_seconds,
                )
                self.leases[task_id] = lease
                return TaskView(
                    task_id=task_id,
                    item_id=item_id,
                    stage=current_stage,
                    assignee=annotator,
                    lease_expiry=lease.expires_at,
                    item=state.item,
                    version=state.version,
                )
        return None

    def _take_lease(self, task_id: str, annotator: str, stage: str) -> _ItemState:
        lease = self.leases.get(task_id)
        if lease is None:
            raise NotFoundError(f"no such task {task_id!r}")
        if lease.assignee != annotator:
            raise ConflictError(f"task {task_id} is leased to {lease.assignee}")
        if lease.stage != stage:
            raise ConflictError(f"task {task_id} belongs to stage {lease.stage}")
        if lease.expires_at <= self.clock():
            del self.leases[task_id]
            raise ConflictError(f"lease on task {task_id} has expired")
        return self.states[lease.item_id]

    def _finish(self, task_id: str, state: _ItemState, expected_version: Optional[int]) -> None:
        if expected_version is not None and expected_version != state.version:
            raise ConflictError(
                f"version conflict on item {state.item.id}: "
                f"expected {expected_version}, at {state.version}"
            )

    # ------------------------------------------------------------- stage: verify

    @staticmethod
    def _validate_verdicts(item: AnnotatedSentence, verdicts: list[Verdict]) -> None:
        candidate_spans = {e.span for e in item.expressions}
        for verdict in verdicts:
            if tuple(verdict.span) not in candidate_spans:
                raise ValidationFailure(
                    f"verdict span {verdict.span} is not a candidate of item {item.id}",
                    rule="verify_verdict_span_must_match_candidate",
                )
            if verdict.is_figurative and (not verdict.category or not verdict.scope):
                raise ValidationFailure(
                    f"figurative verdict on span {verdict.span} needs category and scope",
                    rule="verify_figurative_requires_category_and_scope",
                )

    def _apply_verify(self, item_id: str, annotator: str, verdicts: list[Verdict]) -> None:
        state = self.states[item_id]
        item = state.item
        self._validate_verdicts(item, verdicts)
        by_span = {e.span: e for e in item.expressions}
        confirmed: list[FigurativeExpression] = []
        for verdict in verdicts:
            if not verdict.is_figurative:
                continue
            existing = by_span[tuple(verdict.span)]
            confirmed.append(
                FigurativeExpression(
                    surface=existing.surface,
                    span=existing.span,
                    category=verdict.category or existing.category,
                    scope=verdict.scope or existing.scope,
                    verified=True,
                )
            )
        item.expressions = confirmed
        item.status = "verified" if confirmed else "rejected"
        item.provenance["verified_by"] = annotator
        state.version += 1

    def submit_verification(
        self,
        task_id: str,
        annotator: str,
        verdicts: list[Verdict],
        expected_version: Optional[int] = None,
    ) -> AnnotatedSentence:
        self._check_annotator(annotator)
        state = self._take_lease(task_id, annotator, VERIFY)
        if state.item.status != "screened":
            raise ConflictError(f"item {state.item.id} is not awaiting verification")
        self._finish(task_id, state, expected_version)
        self._apply_verify(state.item.id, annotator, verdicts)
        del self.leases[task_id]
        self.events.append(
            "verify",
            {
                "item_id": state.item.id,
                "annotator": annotator,
                "verdicts": [
                    {
                        "span": list(v.span),
                        "is_figurative": v.is_figurative,
                        "category": v.category,
                        "scope": v.scope,
                    }
                    for v in verdicts
                ],
            },
        )
        return state.item

    # ---------------------------------------------------------------- stage: ems

    def _apply_ems(self, item_id: str, annotator: str, ems_text: str) -> None:
        state = self.states[item_id]
        state.item.ems = ems_text.strip()
        state.item.status = "ems_done"
        state.item.provenance["ems_by"] = annotator
        state.version += 1

    def submit_ems(
        self,
        task_id: str,
        annotator: str,
        ems_text: str,
        expected_version: Optional[int] = None,
    ) -> AnnotatedSentence:
        self._check_annotator(annotator)
        state = self._take_lease(task_id, annotator, EMS)
        if state.item.status != "verified":
            raise ConflictError(f"item {state.item.id} is not awaiting an EMS")
        if not ems_text.strip():
            raise ValidationFailure("EMS text must be non-empty", rule="ems_text_required_nonempty")
        self._finish(task_id, state, expected_version)
        self._apply_ems(state.item.id, annotator, ems_text)
        del self.leases[task_id]
        self.events.append("ems", {"item_id": state.item.id, "annotator": annotator, "ems": ems_text.strip()})
        return state.item

    # ------------------------------------------------------------ DMS candidates

    def _apply_candidates(self, item_id: str, candidates: list[str]) -> None:
        state = self.states[item_id]
        state.item.dms_candidates = list(candidates)
        state.item.status = "dms_candidates_ready"
        state.version += 1

    def attach_dms_candidates(self, item_id: str, candidates: list[str]) -> AnnotatedSentence:
        state = self.states.get(item_id)
        if state is None:
            raise NotFoundError(f"no such item {item_id!r}")
        if state.item.status != "ems_done":
            raise ConflictError(f"item {item_id} is not awaiting DMS candidates")
        if len(candidates) != 4 or any(not c.strip() for c in candidates):
            raise ValidationFailure("exactly four non-empty DMS candidates are required")
        self._apply_candidates(item_id, candidates)
        self.events.append("dms_candidates", {"item_id": item_id, "candidates": list(candidates)})
        return state.item

    # ---------------------------------------------------------- stage: dms_select

    def _apply_dms_select(self, item_id: str, submission: DmsSubmission) -> None:
        state = self.states[item_id]
        state.dms_submissions[submission.annotator] = submission
        state.version += 1
        if len(state.dms_submissions) < DMS_REQUIRED_SUBMISSIONS:
            return
        first, second = list(state.dms_submissions.values())[:2]
        if first.agrees_with(second):
            dms, choice = first.resolved_dms(state.item.dms_candidates)
            state.item.dms = dms
            state.item.dms_choice = choice
            state.item.status = "dms_selected"
        else:
            state.adjudication_open = True
            self.disagreement_count += 1

    def submit_dms_selection(
        self,
        task_id: str,
        annotator: str,
        submission: DmsSubmission,
        expected_version: Optional[int] = None,
    ) -> AnnotatedSentence:
        self._check_annotator(annotator)
        submission.validate()
        if submission.annotator != annotator:
            raise ValidationFailure("submission annotator must match the caller")
        state = self._take_lease(task_id, annotator, DMS_SELECT)
        if state.item.status != "dms_candidates_ready" or state.adjudication_open:
            raise ConflictError(f"item {state.item.id} is not awaiting DMS selection")
        if annotator in state.dms_submissions:
            raise ConflictError(f"annotator {annotator} already submitted for {state.item.id}")
        submission.resolved_dms(state.item.dms_candidates)  # candidate index check
        self._finish(task_id, state, expected_version)
        self._apply_dms_select(state.item.id, submission)
        del self.leases[task_id]
        self.events.append(
            "dms_select",
            {
                "item_id": state.item.id,
                "annotator": annotator,
                "choice": submission.choice,
                "custom_text": submission.custom_text,
            },
        )
        return state.item

    # ---------------------------------------------------------- stage: adjudicate

    def _apply_adjudicate(self, item_id: str, submission: DmsSubmission) -> None:
        state = self.states[item_id]
        dms, choice = submission.resolved_dms(state.item.dms_candidates)
        state.item.dms = dms
        state.item.dms_choice = choice
        state.item.status = "adjudicated"
        state.adjudication_open = False
        state.adjudicated_by = submission.annotator
        state.version += 1
        self.adjudication_count += 1

    def resolve_adjudication(
        self,
        task_id: str,
        annotator: str,
        submission: DmsSubmission,
        expected_version: Optional[int] = None,
    ) -> AnnotatedSentence:
        self._check_annotator(annotator)
        submission.validate()
        state = self._take_lease(task_id, annotator, ADJUDICATE)
        if not state.adjudication_open:
            raise ConflictError(f"item {state.item.id} has no open disagreement")
        self._finish(task_id, state, expected_version)
        self._apply_adjudicate(state.item.id, submission)
        del self.leases[task_id]
        self.events.append(
            "adjudicate",
            {
                "item_id": state.item.id,
                "annotator": annotator,
                "choice": submission.choice,
                "custom_text": submission.custom_text,
            },
        )
        return state.item

    # ------------------------------------------------------------------- queries

    def get_item(self, item_id: str) -> tuple[AnnotatedSentence, int]:
        state = self.states.get(item_id)
        if state is None:
            raise NotFoundError(f"no such item {item_id!r}")
        return state.item, state.version

    def items(self) -> list[AnnotatedSentence]:
        return [self.states[item_id].item for item_id in sorted(self.states)]

    def status_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for state in self.states.values():
            counts[state.item.status] = counts.get(state.item.status, 0) + 1
        return counts

    def open_adjudications(self) -> list[str]:
        return sorted(sid for sid, st in self.states.items() if st.adjudication_open)

    # -------------------------------------------------------------------- replay

    def _replay_events(self, records: list[dict]) -> None:
        for record in records:
            self._apply_event(record)

    def _apply_event(self, record: dict) -> None:
        kind = record["type"]
        if kind == "verify":
            verdicts = [
                Verdict(
                    span=(v["span"][0], v["span"][1]),
                    is_figurative=v["is_figurative"],
                    category=v.get("category"),
                    scope=v.get("scope"),
                )
                for v in record["verdicts"]
            ]
            self._apply_verify(record["item_id"], record["annotator"], verdicts)
        elif kind == "ems":
            self._apply_ems(record["item_id"], record["annotator"], record["ems"])
        elif kind == "dms_candidates":
            self._apply_candidates(record["item_id"], record["candidates"])
        elif kind == "dms_select":
            self._apply_dms_select(
                record["item_id"],
                DmsSubmission(record["annotator"], record["choice"], record.get("custom_text")),
            )
        elif kind == "adjudicate":
            self._apply_adjudicate(
                record["item_id"],
                DmsSubmission(record["annotator"], record["choice"], record.get("custom_text")),
            )
        else:
            raise ValueError(f"unknown event type {kind!r}")

    def replay_snapshot(self) -> str:
        """Dataset JSONL produced by replaying the event log from the initial
        snapshot; equals the live dataset for a consistent log."""
        twin = AnnotationWorkflow(
            copy.deepcopy(list(self.initial_items.values())),
            self.annotators,
            lease_seconds=self.lease_seconds,
            clock=self.clock,
        )
        twin._replay_events(self.events.records)
        return dumps_dataset(twin.items())

    def dataset_snapshot(self) -> str:
        return dumps_dataset(self.items())
