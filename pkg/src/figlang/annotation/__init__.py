"""Human annotation workflow: state machine, event log, HTTP service."""

from figlang.annotation.workflow import (
    AnnotationWorkflow,
    ConflictError,
    DmsSubmission,
    NotFoundError,
    TaskView,
    ValidationFailure,
    Verdict,
    WorkflowError,
)
from figlang.annotation.events import EventLog

__all__ = [
    "AnnotationWorkflow",
    "DmsSubmission",
    "Verdict",
    "TaskView",
    "EventLog",
    "WorkflowError",
    "ConflictError",
    "ValidationFailure",
    "NotFoundError",
]
