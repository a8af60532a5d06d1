#!/usr/bin/env python3
"""Regenerate the shipped reference data files under data/.

All builders are deterministic; rerunning this script must reproduce the
committed files byte for byte (the test suite checks exactly that).

Usage:
    python scripts/build_reference_data.py [--out data/]
"""

import argparse
from pathlib import Path

from figlang.bench.reference import (
    build_emotion_records,
    build_incivility_records,
    build_priority_records,
    write_jsonl,
)
from figlang.figdata.reference import build_reference_dataset
from figlang.figdata.store import save_dataset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    save_dataset(build_reference_dataset(), out / "reference_annotations.jsonl")
    write_jsonl(build_emotion_records(), out / "emotion_github.jsonl")
    write_jsonl(build_incivility_records(), out / "incivility_comments.jsonl")
    write_jsonl(build_priority_records(), out / "bug_priority.jsonl")
    print(f"reference data written to {out}/")


if __name__ == "__main__":
    main()
