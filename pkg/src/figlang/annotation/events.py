"""Append-only event log backing the annotation workflow."""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import Callable, Iterator, Optional


class EventLog:
    """JSONL event sink; keeps an in-memory copy for replay checks."""

    def __init__(
        self,
        path: Optional[str | Path] = None,
        clock: Callable[[], float] = time.time,
    ) -> None:
        self.path = Path(path) if path else None
        self.clock = clock
        self.records: list[dict] = []
        if self.path and self.path.exists():
            with open(self.path, encoding="utf-8") as handle:
                for line in handle:
                    line = line.strip()
                    if line:
                        self.records.append(json.loads(line))

    def append(self, event_type: str, payload: dict) -> dict:
        record = {
            "seq": len(self.records),
            "ts": self.clock(),
            "type": event_type,
            **payload,
        }
        self.records.append(record)
        if self.path:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, sort_keys=True, ensure_ascii=False))
                handle.write("\n")
        return record

    def __iter__(self) -> Iterator[dict]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)
