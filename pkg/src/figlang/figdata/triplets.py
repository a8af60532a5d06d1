"""Contrastive triplet construction from selected/adjudicated sentences."""

from __future__ import annotations

import logging
from typing import Iterable

from figlang.figdata.model import AnnotatedSentence, TripletRecord, status_rank

logger = logging.getLogger("figlang.figdata")

_ELIGIBLE_RANK = status_rank("dms_selected")


def build_triplets(dataset: Iterable[AnnotatedSentence]) -> list[TripletRecord]:
    """Two triplets per eligible sentence: original and EMS each anchor once.

    Eligible means status at least dms_selected with both EMS and DMS
    present and the DMS distinct from both. Ineligible or degenerate items
    are skipped with a warning count; output is ordered by source id.
    """
    triplets: list[TripletRecord] = []
    skipped = 0
    for item in sorted(dataset, key=lambda s: s.id):
        if item.rank() < _ELIGIBLE_RANK:
            skipped += 1
            continue
        if not item.ems or not item.dms or item.dms in (item.original, item.ems):
            skipped += 1
            continue
        triplets.append(
            TripletRecord(item.original, item.ems, item.dms, item.id, "orig_anchor")
        )
        triplets.append(
            TripletRecord(item.ems, item.original, item.dms, item.id, "ems_anchor")
        )
    if skipped:
        logger.warning("build_triplets skipped %d ineligible or degenerate items", skipped)
    return triplets
