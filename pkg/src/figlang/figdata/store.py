"""Canonical JSONL persistence for annotated sentences and triplets.

Canonical form: UTF-8, sorted keys, compact separators, one record per
line. Saving what was loaded reproduces the file byte for byte, which keeps
annotation rounds diffable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Union

from figlang.figdata.model import AnnotatedSentence, TripletRecord

PathLike = Union[str, Path]


class SchemaError(ValueError):
    """A record violated the dataset schema; pinpoints line and field."""

    def __init__(self, line: int, field: str, message: str) -> None:
        super().__init__(f"line {line}, field {field!r}: {message}")
        self.line = line
        self.field = field


def canonical_json(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


_REQUIRED_FIELDS = {
    "id": str,
    "original": str,
    "expressions": list,
    "status": str,
}
_EXPRESSION_FIELDS = {"surface": str, "span": list, "category": str, "scope": str}


def _validate_record(record: dict, line: int) -> None:
    for name, typ in _REQUIRED_FIELDS.items():
        if name not in record:
            raise SchemaError(line, name, "missing required field")
        if not isinstance(record[name], typ):
            raise SchemaError(line, name, f"expected {typ.__name__}")
    for i, expr in enumerate(record["expressions"]):
        for name, typ in _EXPRESSION_FIELDS.items():
            if name not in expr:
                raise SchemaError(line, f"expressions[{i}].{name}", "missing required field")
            if not isinstance(expr[name], typ):
                raise SchemaError(line, f"expressions[{i}].{name}", f"expected {typ.__name__}")
        start, end = expr["span"][0], expr["span"][1]
        text = record["original"]
        if not (0 <= start < end <= len(text)):
            raise SchemaError(line, f"expressions[{i}].span", f"span {expr['span']} outside sentence bounds")
        if expr.get("verified") and text[start:end] != expr["surface"]:
            raise SchemaError(
                line,
                f"expressions[{i}].surface",
                f"span substring {text[start:end]!r} != surface {expr['surface']!r}",
            )


def load_dataset(path: PathLike) -> list[AnnotatedSentence]:
    """Read an annotated-sentence JSONL file, validating the schema."""
    items: list[AnnotatedSentence] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, "<json>", str(exc)) from exc
            _validate_record(record, line_no)
            try:
                items.append(AnnotatedSentence.from_dict(record))
            except (ValueError, KeyError) as exc:
                raise SchemaError(line_no, "<record>", str(exc)) from exc
    return items


def save_dataset(items: Iterable[AnnotatedSentence], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for item in items:
            handle.write(canonical_json(item.to_dict()))
            handle.write("\n")


def dumps_dataset(items: Iterable[AnnotatedSentence]) -> str:
    return "".join(canonical_json(item.to_dict()) + "\n" for item in items)


def load_triplets(path: PathLike) -> list[TripletRecord]:
    triplets: list[TripletRecord] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            raw = raw.strip()
            if not raw:
                continue
            try:
                record = json.loads(raw)
                triplets.append(TripletRecord.from_dict(record))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise SchemaError(line_no, "<triplet>", str(exc)) from exc
    return triplets


def save_triplets(triplets: Iterable[TripletRecord], path: PathLike) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for t in triplets:
            handle.write(canonical_json(t.to_dict()))
            handle.write("\n")
