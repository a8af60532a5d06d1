"""Shared fixtures and the acceptance-criterion result printer."""

from __future__ import annotations

import pytest

from figlang.figdata.model import AnnotatedSentence, FigurativeExpression, TripletRecord


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\nACCEPTANCE {name}: {outcome}", flush=True)


def make_annotated(
    item_id: str,
    original: str,
    surface: str,
    scope: str = "general",
    category: str = "metaphor",
    ems: str | None = None,
    dms: str | None = None,
    status: str = "adjudicated",
    extra_expressions: list[FigurativeExpression] | None = None,
) -> AnnotatedSentence:
    start = original.index(surface)
    expressions = [
        FigurativeExpression(surface, (start, start + len(surface)), category, scope, True)
    ]
    if extra_expressions:
        expressions.extend(extra_expressions)
    return AnnotatedSentence(
        id=item_id,
        original=original,
        expressions=expressions,
        ems=ems,
        dms=dms,
        status=status,
    )


@pytest.fixture
def contrastive_triplets() -> list[TripletRecord]:
    """Synthetic triplets where anchors/positives share token clusters."""
    triplets = []
    for i in range(50):
        anchor = f"core{i % 7} shared{i % 5} topic{i % 3}"
        positive = f"shared{i % 5} core{i % 7} extra{i % 4}"
        negative = f"away{i % 6} other{i % 5} noise{i % 2}"
        triplets.append(TripletRecord(anchor, positive, negative, f"s{i:03d}", "orig_anchor"))
    return triplets


def rq1_constructed_dataset(n: int = 60) -> list[AnnotatedSentence]:
    """EMS permutes the original's words; DMS shares none of them."""
    items = []
    for i in range(n):
        kind = ("se_specific", "general", "both")[i % 3]
        original = f"alpha beta nasty bug gamma{i} delta"
        start = original.index("nasty bug")
        expressions = [
            FigurativeExpression("nasty bug", (start, start + 9), "metaphor", "se_specific", True)
        ]
        if kind == "general":
            expressions = [
                FigurativeExpression("nasty bug", (start, start + 9), "metaphor", "general", True)
            ]
        elif kind == "both":
            expressions.append(
                FigurativeExpression("nasty bug", (start, start + 9), "idiom", "general", True)
            )
        items.append(
            AnnotatedSentence(
                id=f"rq1-{i:03d}",
                original=original,
                expressions=expressions,
                ems=f"beta alpha gamma{i} delta nasty bug",
                dms=f"omega{i} psi chi phi upsilon",
                status="adjudicated",
            )
        )
    return items
