"""Workflow state machine, leases, adjudication, event replay, HTTP API."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from figlang.annotation import (
    AnnotationWorkflow,
    ConflictError,
    DmsSubmission,
    NotFoundError,
    ValidationFailure,
    Verdict,
)
from figlang.annotation.rules import RULE_IDS
from figlang.annotation.service import create_app
from figlang.figdata.dms import StubLlmClient
from figlang.figdata.model import AnnotatedSentence, FigurativeExpression


def make_item(i: int) -> AnnotatedSentence:
    text = f"this nasty bug number {i} keeps crashing the nightly demo"
    start = text.index("nasty bug")
    return AnnotatedSentence(
        id=f"it{i:02d}",
        original=text,
        expressions=[
            FigurativeExpression("nasty bug", (start, start + 9), "metaphor", "general", False)
        ],
        status="screened",
    )


class FakeClock:
    def __init__(self, value: float = 1000.0) -> None:
        self.value = value

    def __call__(self) -> float:
        return self.value

    def advance(self, seconds: float) -> None:
        self.value += seconds


@pytest.fixture
def clock():
    return FakeClock()


@pytest.fixture
def workflow(clock):
    return AnnotationWorkflow(
        [make_item(i) for i in range(4)], ["alice", "bob"], lease_seconds=60, clock=clock
    )


VERDICT = Verdict((5, 14), True, "metaphor", "se_specific")


def drive_to_candidates(wf: AnnotationWorkflow, item_ids=None) -> None:
    """Push items through verify, ems, and candidate attachment."""
    while True:
        task = wf.next_task("alice", "verify")
        if task is None or (item_ids and task.item_id not in item_ids):
            break
        start = task.item.original.index("nasty bug")
        wf.submit_verification(
            task.task_id, "alice", [Verdict((start, start + 9), True, "metaphor", "se_specific")]
        )
    while True:
        task = wf.next_task("bob", "ems")
        if task is None:
            break
        wf.submit_ems(task.task_id, "bob", f"this persistent defect in {task.item_id} recurs")
    for item in wf.items():
        if item.status == "ems_done":
            wf.attach_dms_candidates(
                item.id,
                [f"cand one {item.id}", f"cand two {item.id}",
                 f"cand three {item.id}", f"cand four {item.id}"],
            )


# ----------------------------------------------------------------- task queue

def test_next_task_empty_queue(clock):
    wf = AnnotationWorkflow([make_item(0)], ["alice"], clock=clock)
    wf.submit_verification(
        wf.next_task("alice", "verify").task_id, "alice", [VERDICT]
    )
    assert wf.next_task("alice", "verify") is None


def test_two_annotators_disjoint_leases(workflow):
    t1 = workflow.next_task("alice", "verify")
    t2 = workflow.next_task("bob", "verify")
    assert t1.item_id != t2.item_id
    assert t1.assignee == "alice" and t2.assignee == "bob"


def test_fifo_by_item_id(workflow):
    assert workflow.next_task("alice", "verify").item_id == "it00"
    assert workflow.next_task("bob", "verify").item_id == "it01"


def test_lease_expiry_reoffers_task(workflow, clock):
    t1 = workflow.next_task("alice", "verify")
    assert workflow.next_task("bob", "verify").item_id != t1.item_id
    clock.advance(120)
    # alice never submitted; the task goes back on offer for bob
    assert workflow.next_task("bob", "verify").item_id == t1.item_id


def test_expired_lease_submission_conflicts(workflow, clock):
    task = workflow.next_task("alice", "verify")
    clock.advance(120)
    with pytest.raises(ConflictError, match="expired"):
        workflow.submit_verification(task.task_id, "alice", [VERDICT])


def test_unknown_annotator_rejected(workflow):
    with pytest.raises(ValidationFailure):
        workflow.next_task("mallory")


# -------------------------------------------------------------------- verify

def test_verify_all_rejected_marks_item_rejected(workflow):
    task = workflow.next_task("alice", "verify")
    item = workflow.submit_verification(
        task.task_id, "alice", [Verdict((5, 14), False)]
    )
    assert item.status == "rejected"
    assert item.expressions == []


def test_verify_confirms_expression(workflow):
    task = workflow.next_task("alice", "verify")
    item = workflow.submit_verification(task.task_id, "alice", [VERDICT])
    assert item.status == "verified"
    assert item.expressions[0].verified
    assert item.expressions[0].category == "metaphor"
    assert item.expressions[0].scope == "se_specific"


def test_verify_mixed_verdicts_keeps_confirmed_only(clock):
    text = "a nasty bug and an uphill battle and a golden path here"
    spans = {
        "nasty bug": (text.index("nasty bug"), text.index("nasty bug") + 9),
        "uphill battle": (text.index("uphill battle"), text.index("uphill battle") + 13),
        "golden path": (text.index("golden path"), text.index("golden path") + 11),
    }
    item = AnnotatedSentence(
        id="mix",
        original=text,
        expressions=[
            FigurativeExpression(s, spans[s], "idiom", "general", False) for s in spans
        ],
        status="screened",
    )
    wf = AnnotationWorkflow([item], ["alice"], clock=clock)
    task = wf.next_task("alice", "verify")
    updated = wf.submit_verification(
        task.task_id,
        "alice",
        [
            Verdict(spans["nasty bug"], True, "metaphor", "se_specific"),
            Verdict(spans["uphill battle"], True, "idiom", "general"),
            Verdict(spans["golden path"], False),
        ],
    )
    assert updated.status == "verified"
    assert {e.surface for e in updated.expressions} == {"nasty bug", "uphill battle"}


def test_verify_span_not_candidate_rejected(workflow):
    task = workflow.next_task("alice", "verify")
    with pytest.raises(ValidationFailure, match="candidate"):
        workflow.submit_verification(task.task_id, "alice", [Verdict((0, 4), True, "idiom", "general")])


# ------------------------------------------------------------ dms + adjudicate

def test_dms_agreement_finalizes(workflow):
    drive_to_candidates(workflow)
    t = workflow.next_task("alice", "dms_select")
    workflow.submit_dms_selection(t.task_id, "alice", DmsSubmission("alice", "c2"))
    t = workflow.next_task("bob", "dms_select")
    assert t.item_id == "it00"
    item = workflow.submit_dms_selection(t.task_id, "bob", DmsSubmission("bob", "c2"))
    assert item.status == "dms_selected"
    assert item.dms == "cand two it00"
    assert item.dms_choice == "c2"
    assert workflow.open_adjudications() == []


def test_dms_disagreement_creates_adjudication(workflow):
    drive_to_candidates(workflow)
    t = workflow.next_task("alice", "dms_select")
    workflow.submit_dms_selection(t.task_id, "alice", DmsSubmission("alice", "c1"))
    t = workflow.next_task("bob", "dms_select")
    workflow.submit_dms_selection(
        t.task_id, "bob", DmsSubmission("bob", "none", "a custom different sentence")
    )
    assert workflow.open_adjudications() == ["it00"]
    adj = workflow.next_task("alice", "adjudicate")
    item = workflow.resolve_adjudication(adj.task_id, "alice", DmsSubmission("alice", "c3"))
    assert item.status == "adjudicated"
    assert item.dms == "cand three it00"
    assert workflow.disagreement_count == workflow.adjudication_count == 1


def test_adjudication_custom_text(workflow):
    drive_to_candidates(workflow)
    for annotator, submission in (
        ("alice", DmsSubmission("alice", "c1")),
        ("bob", DmsSubmission("bob", "c2")),
    ):
        t = workflow.next_task(annotator, "dms_select")
        workflow.submit_dms_selection(t.task_id, annotator, submission)
    adj = workflow.next_task("bob", "adjudicate")
    item = workflow.resolve_adjudication(
        adj.task_id, "bob", DmsSubmission("bob", "none", "entirely new different sentence")
    )
    assert item.dms == "entirely new different sentence"
    assert item.dms_choice == "none_custom"


def test_none_without_custom_text_rejected(workflow):
    drive_to_candidates(workflow)
    t = workflow.next_task("alice", "dms_select")
    with pytest.raises(ValidationFailure) as err:
        workflow.submit_dms_selection(t.task_id, "alice", DmsSubmission("alice", "none"))
    assert err.value.rule == "dms_choice_none_requires_custom_text"


def test_candidate_choice_with_custom_text_rejected(workflow):
    drive_to_candidates(workflow)
    t = workflow.next_task("alice", "dms_select")
    with pytest.raises(ValidationFailure) as err:
        workflow.submit_dms_selection(
            t.task_id, "alice", DmsSubmission("alice", "c1", "stray text")
        )
    assert err.value.rule == "dms_choice_candidate_forbids_custom_text"


def test_same_annotator_cannot_submit_twice(workflow):
    drive_to_candidates(workflow)
    t = workflow.next_task("alice", "dms_select")
    workflow.submit_dms_selection(t.task_id, "alice", DmsSubmission("alice", "c1"))
    t2 = workflow.next_task("alice", "dms_select")
    assert t2.item_id != t.item_id  # next item, not a second slot on the same one


def test_adjudicating_agreed_item_conflicts(workflow):
    drive_to_candidates(workflow)
    for annotator in ("alice", "bob"):
        t = workflow.next_task(annotator, "dms_select")
        workflow.submit_dms_selection(t.task_id, annotator, DmsSubmission(annotator, "c1"))
    assert workflow.next_task("alice", "adjudicate") is None


def test_scripted_session_six_disagreements(clock):
    wf = AnnotationWorkflow(
        [make_item(i) for i in range(20)], ["alice", "bob"], lease_seconds=600, clock=clock
    )
    drive_to_candidates(wf)
    disagree_on = {f"it{i:02d}" for i in (2, 5, 8, 11, 14, 17)}
    for _ in range(20):
        t = wf.next_task("alice", "dms_select")
        wf.submit_dms_selection(t.task_id, "alice", DmsSubmission("alice", "c1"))
    for _ in range(20):
        t = wf.next_task("bob", "dms_select")
        choice = "c2" if t.item_id in disagree_on else "c1"
        wf.submit_dms_selection(t.task_id, "bob", DmsSubmission("bob", choice))
    assert set(wf.open_adjudications()) == disagree_on
    assert wf.disagreement_count == 6
    while True:
        t = wf.next_task("alice", "adjudicate")
        if t is None:
            break
        wf.resolve_adjudication(t.task_id, "alice", DmsSubmission("alice", "c2"))
    assert wf.adjudication_count == 6
    ranks = {item.id: item.rank() for item in wf.items()}
    from figlang.figdata.model import status_rank

    assert all(rank >= status_rank("dms_selected") for rank in ranks.values())
    statuses = [item.status for item in wf.items()]
    assert statuses.count("adjudicated") == 6
    assert statuses.count("dms_selected") == 14


# ------------------------------------------------------------ state machine

def test_no_stage_skipping(workflow):
    with pytest.raises(NotFoundError):
        workflow.submit_ems("ems:it00:alice", "alice", "text")
    task = workflow.next_task("alice", "verify")
    with pytest.raises(ConflictError):
        # verify lease cannot be used for the ems endpoint
        workflow.submit_ems(task.task_id, "alice", "text")
    with pytest.raises(ConflictError):
        workflow.attach_dms_candidates("it00", ["a", "b", "c", "d"])


def test_version_conflict(workflow):
    task = workflow.next_task("alice", "verify")
    with pytest.raises(ConflictError, match="version"):
        workflow.submit_verification(task.task_id, "alice", [VERDICT], expected_version=99)


def test_event_replay_reconstructs_dataset(workflow, clock):
    drive_to_candidates(workflow)
    for annotator, choice_map in (("alice", {}), ("bob", {"it01": "c3"})):
        while True:
            t = workflow.next_task(annotator, "dms_select")
            if t is None:
                break
            choice = choice_map.get(t.item_id, "c1")
            workflow.submit_dms_selection(t.task_id, annotator, DmsSubmission(annotator, choice))
    while True:
        t = workflow.next_task("alice", "adjudicate")
        if t is None:
            break
        workflow.resolve_adjudication(t.task_id, "alice", DmsSubmission("alice", "c4"))
    assert workflow.replay_snapshot() == workflow.dataset_snapshot()
    assert len(workflow.events) > 0


def test_quiescence_disagreements_equal_adjudications(workflow):
    drive_to_candidates(workflow)
    disagree = {"it00", "it02"}
    for annotator in ("alice", "bob"):
        while True:
            t = workflow.next_task(annotator, "dms_select")
            if t is None:
                break
            choice = "c1" if annotator == "alice" or t.item_id not in disagree else "c2"
            workflow.submit_dms_selection(t.task_id, annotator, DmsSubmission(annotator, choice))
    while True:
        t = workflow.next_task("bob", "adjudicate")
        if t is None:
            break
        workflow.resolve_adjudication(t.task_id, "bob", DmsSubmission("bob", "c1"))
    assert workflow.disagreement_count == workflow.adjudication_count == len(disagree)


# ----------------------------------------------------------------------- HTTP

@pytest.fixture
def client(clock):
    wf = AnnotationWorkflow(
        [make_item(i) for i in range(3)], ["alice", "bob"], lease_seconds=600, clock=clock
    )
    app = create_app(wf, llm=StubLlmClient())
    return TestClient(app)


def _http_next(client, annotator, stage):
    response = client.get("/tasks/next", params={"annotator": annotator, "stage": stage})
    assert response.status_code == 200
    return response.json()["task"]


def test_http_full_item_lifecycle(client):
    task = _http_next(client, "alice", "verify")
    assert task["stage"] == "verify"
    item = task["item"]
    span = item["expressions"][0]["span"]
    response = client.post(
        f"/tasks/{task['task_id']}/verify",
        json={
            "annotator": "alice",
            "verdicts": [
                {"span": span, "is_figurative": True, "category": "metaphor", "scope": "general"}
            ],
        },
    )
    assert response.status_code == 200
    assert response.json()["item"]["status"] == "verified"

    task = _http_next(client, "bob", "ems")
    response = client.post(
        f"/tasks/{task['task_id']}/ems",
        json={"annotator": "bob", "ems": "this persistent defect keeps crashing the demo"},
    )
    assert response.status_code == 200
    # The stub LLM attached four candidates right after the EMS.
    assert response.json()["item"]["status"] == "dms_candidates_ready"
    assert len(response.json()["item"]["dms_candidates"]) == 4

    for annotator in ("alice", "bob"):
        task = _http_next(client, annotator, "dms_select")
        response = client.post(
            f"/tasks/{task['task_id']}/dms", json={"annotator": annotator, "choice": "c1"}
        )
        assert response.status_code == 200
    assert response.json()["item"]["status"] == "dms_selected"


def test_http_none_without_custom_text_422(client):
    task = _http_next(client, "alice", "verify")
    span = task["item"]["expressions"][0]["span"]
    client.post(
        f"/tasks/{task['task_id']}/verify",
        json={"annotator": "alice",
              "verdicts": [{"span": span, "is_figurative": True, "category": "metaphor",
                            "scope": "general"}]},
    )
    task = _http_next(client, "alice", "ems")
    client.post(f"/tasks/{task['task_id']}/ems", json={"annotator": "alice", "ems": "plain words"})
    task = _http_next(client, "alice", "dms_select")
    response = client.post(
        f"/tasks/{task['task_id']}/dms", json={"annotator": "alice", "choice": "none"}
    )
    assert response.status_code == 422
    assert response.json()["rule"] == "dms_choice_none_requires_custom_text"


def test_http_stale_task_conflict(client):
    response = client.post(
        "/tasks/verify:it00:alice/verify", json={"annotator": "alice", "verdicts": []}
    )
    assert response.status_code == 404  # never leased
    task = _http_next(client, "alice", "verify")
    response = client.post(
        f"/tasks/{task['task_id']}/verify", json={"annotator": "bob", "verdicts": []}
    )
    assert response.status_code == 409  # leased by alice, submitted by bob


def test_http_rules_and_guidelines(client):
    rules = client.get("/rules").json()["rules"]
    assert set(rules) == set(RULE_IDS)
    guidelines = client.get("/guidelines").json()
    assert "4 candidate" in guidelines["dms_select"]
    assert "MIP" in guidelines["verify"]


def test_http_stats_and_items(client):
    stats = client.get("/stats").json()
    assert stats["status_counts"] == {"screened": 3}
    assert stats["dataset"]["n_sentences"] == 3
    item = client.get("/items/it00").json()["item"]
    assert item["id"] == "it00"
    assert client.get("/items/missing").status_code == 404
    listing = client.get("/items", params={"status": "screened"}).json()["items"]
    assert listing == ["it00", "it01", "it02"]


def test_http_replay_check(client):
    task = _http_next(client, "alice", "verify")
    span = task["item"]["expressions"][0]["span"]
    client.post(
        f"/tasks/{task['task_id']}/verify",
        json={"annotator": "alice",
              "verdicts": [{"span": span, "is_figurative": True, "category": "metaphor",
                            "scope": "general"}]},
    )
    response = client.get("/replay-check").json()
    assert response["identical"] is True
    assert response["events"] == 1
