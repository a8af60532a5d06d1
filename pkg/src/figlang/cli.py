"""Command-line entry point: one subcommand per pipeline stage.

Options resolve as config file < FIGLANG_* environment < explicit flags.
Every artifact-producing command writes a run manifest next to its outputs.
Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from figlang import config as cfgmod
from figlang.manifest import write_manifest

logger = logging.getLogger("figlang.cli")


def _print_config(args: argparse.Namespace, names_defaults: dict) -> int:
    config = cfgmod.load_config_file(getattr(args, "config", None))
    for name, value in cfgmod.effective_config(names_defaults, args, config).items():
        print(f"{name} = {value!r}")
    return 0


def _resolve(args: argparse.Namespace, name: str, default=None, cast=None):
    config = cfgmod.load_config_file(getattr(args, "config", None))
    return cfgmod.resolve(name, getattr(args, name.replace("-", "_"), None), config, default, cast)


# ------------------------------------------------------------------ ingest

def cmd_ingest(args: argparse.Namespace) -> int:
    from figlang.ingest.github import GithubCommentClient, ReplayTransport, parse_timestamp

    defaults = {"repo": None, "kind": "issue", "limit": 1000, "since": None, "until": None,
                "out": "runs/ingest", "replay": None}
    if args.print_config:
        return _print_config(args, defaults)
    repo = _resolve(args, "repo")
    if not repo:
        raise ValueError("--repo is required")
    kind = _resolve(args, "kind", "issue")
    limit = int(_resolve(args, "limit", 1000))
    since = _resolve(args, "since")
    until = _resolve(args, "until")
    out_dir = Path(_resolve(args, "out", "runs/ingest"))
    out_dir.mkdir(parents=True, exist_ok=True)
    replay = _resolve(args, "replay")

    window = (
        parse_timestamp(since) if since else None,
        parse_timestamp(until) if until else None,
    )
    transport = ReplayTransport(replay) if replay else None
    client = GithubCommentClient(transport=transport)
    store = out_dir / "raw_comments.jsonl"
    result = client.fetch_comments(repo, window, kind, limit, store_path=store)
    print(f"fetched {len(result.comments)} {kind} comments from {repo}"
          + (f" (PARTIAL: {result.reason})" if result.partial else ""))
    write_manifest(
        out_dir, "ingest",
        {"repo": repo, "kind": kind, "limit": limit, "since": since, "until": until,
         "partial": result.partial},
        inputs=[replay] if replay else [],
        outputs=[store],
    )
    return 0


# ------------------------------------------------------------------ screen

def _read_lexicon_lines(path: Optional[str]) -> list[str]:
    if not path:
        return []
    return [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()]


def cmd_screen(args: argparse.Namespace) -> int:
    from figlang.figdata.model import AnnotatedSentence, FigurativeExpression
    from figlang.figdata.store import save_dataset
    from figlang.ingest.github import read_comment_store
    from figlang.ingest.screen import KeywordAffectScreen, LexiconDetector, screen_candidates
    from figlang.ingest.sentences import filter_short, split_sentences

    defaults = {"comments": None, "out": "runs/screen", "min-words": 5,
                "metaphor-lexicon": None, "idiom-lexicon": None}
    if args.print_config:
        return _print_config(args, defaults)
    comments_path = _resolve(args, "comments")
    if not comments_path:
        raise ValueError("--comments is required")
    out_dir = Path(_resolve(args, "out", "runs/screen"))
    out_dir.mkdir(parents=True, exist_ok=True)
    min_words = int(_resolve(args, "min-words", 5))

    comments = read_comment_store(comments_path)
    sentences = []
    for comment in comments:
        sentences.extend(split_sentences(comment))
    kept = filter_short(sentences, min_words)

    metaphor_surfaces = _read_lexicon_lines(_resolve(args, "metaphor-lexicon"))
    idiom_surfaces = _read_lexicon_lines(_resolve(args, "idiom-lexicon"))
    candidates = screen_candidates(
        kept,
        LexiconDetector(metaphor_surfaces),
        LexiconDetector(idiom_surfaces),
        KeywordAffectScreen(),
    )

    sentences_path = out_dir / "sentences.jsonl"
    with open(sentences_path, "w", encoding="utf-8") as handle:
        for s in kept:
            handle.write(json.dumps(s.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")
    candidates_path = out_dir / "candidates.jsonl"
    with open(candidates_path, "w", encoding="utf-8") as handle:
        for c in candidates:
            handle.write(json.dumps(c.to_dict(), sort_keys=True, ensure_ascii=False) + "\n")

    items = []
    for c in candidates:
        expressions = [
            FigurativeExpression(span.surface, (span.start, span.end), category, "general", False)
            for category, spans in (("metaphor", c.metaphor_candidates), ("idiom", c.idiom_candidates))
            for span in spans
        ]
        items.append(
            AnnotatedSentence(
                id=c.sentence.sentence_id,
                original=c.sentence.text,
                expressions=expressions,
                status="screened",
                provenance=dict(c.sentence.source_comment),
            )
        )
    screened_path = out_dir / "screened_items.jsonl"
    save_dataset(items, screened_path)
    print(f"{len(comments)} comments -> {len(sentences)} sentences -> "
          f"{len(kept)} after length filter -> {len(candidates)} candidates")
    write_manifest(
        out_dir, "screen", {"min_words": min_words},
        inputs=[comments_path],
        outputs=[sentences_path, candidates_path, screened_path],
    )
    return 0


# ------------------------------------------------------------------ gen-dms

def _make_llm(spec: str, record: Optional[str]):
    from figlang.figdata.dms import HttpLlmClient, StubLlmClient, TranscriptRecorder, TranscriptReplayClient

    if spec == "stub":
        client = StubLlmClient()
    elif spec.startswith("replay:"):
        client = TranscriptReplayClient(spec.split(":", 1)[1])
    elif spec.startswith("http"):
        _, _, model = spec.partition(":")
        client = HttpLlmClient(model=model or "gpt-4")
    else:
        raise ValueError(f"unknown llm spec {spec!r} (use stub, replay:PATH, or http[:MODEL])")
    if record:
        client = TranscriptRecorder(client, record)
    return client


def cmd_gen_dms(args: argparse.Namespace) -> int:
    from figlang.figdata.dms import DmsGenerationError, generate_dms_candidates
    from figlang.figdata.model import status_rank
    from figlang.figdata.store import load_dataset, save_dataset

    defaults = {"dataset": None, "out": None, "llm": "stub", "record": None, "service-url": None}
    if args.print_config:
        return _print_config(args, defaults)
    llm = _make_llm(_resolve(args, "llm", "stub"), _resolve(args, "record"))
    service_url = _resolve(args, "service-url")

    if service_url:
        import requests

        session = requests.Session()
        listing = session.get(f"{service_url}/items", params={"status": "ems_done"}, timeout=30)
        listing.raise_for_status()
        generated = 0
        for item_id in listing.json()["items"]:
            payload = session.get(f"{service_url}/items/{item_id}", timeout=30).json()["item"]
            from figlang.figdata.model import AnnotatedSentence, FigurativeExpression

            item = AnnotatedSentence(
                id=payload["id"],
                original=payload["original"],
                expressions=[
                    FigurativeExpression(e["surface"], tuple(e["span"]), e["category"], e["scope"], e["verified"])
                    for e in payload["expressions"]
                ],
                ems=payload.get("ems"),
                status=payload["status"],
            )
            try:
                candidates = generate_dms_candidates(item, llm)
            except DmsGenerationError as exc:
                logger.warning("parked %s: %s", item_id, exc)
                continue
            session.post(
                f"{service_url}/items/{item_id}/dms-candidates",
                json={"candidates": candidates},
                timeout=30,
            ).raise_for_status()
            generated += 1
        print(f"generated candidates for {generated} items via {service_url}")
        return 0

    dataset_path = _resolve(args, "dataset")
    out_path = _resolve(args, "out")
    if not dataset_path or not out_path:
        raise ValueError("--dataset and --out are required without --service-url")
    items = load_dataset(dataset_path)
    generated = parked = 0
    for item in items:
        if item.status != "ems_done" or status_rank(item.status) < 0:
            continue
        try:
            generate_dms_candidates(item, llm)
            generated += 1
        except (DmsGenerationError, ValueError) as exc:
            parked += 1
            logger.warning("parked %s: %s", item.id, exc)
    save_dataset(items, out_path)
    print(f"generated candidates for {generated} items ({parked} parked)")
    write_manifest(
        Path(out_path).parent, "gen-dms",
        {"llm": _resolve(args, "llm", "stub")},
        inputs=[dataset_path], outputs=[out_path],
    )
    return 0


# ------------------------------------------------------- serve-annotation

def cmd_serve_annotation(args: argparse.Namespace) -> int:
    import uvicorn

    from figlang.annotation.events import EventLog
    from figlang.annotation.service import create_app
    from figlang.annotation.workflow import AnnotationWorkflow
    from figlang.figdata.store import load_dataset

    defaults = {"dataset": None, "events": None, "annotators": "annotator-a,annotator-b",
                "host": "127.0.0.1", "port": 8700, "lease-seconds": 1800, "llm": None,
                "snapshot": None}
    if args.print_config:
        return _print_config(args, defaults)
    dataset_path = _resolve(args, "dataset")
    if not dataset_path:
        raise ValueError("--dataset is required")
    annotators = [a.strip() for a in str(_resolve(args, "annotators", defaults["annotators"])).split(",") if a.strip()]
    events_path = _resolve(args, "events")
    llm_spec = _resolve(args, "llm")

    items = load_dataset(dataset_path)
    workflow = AnnotationWorkflow(
        items,
        annotators,
        lease_seconds=float(_resolve(args, "lease-seconds", 1800)),
        event_log=EventLog(events_path) if events_path else None,
    )
    llm = _make_llm(llm_spec, None) if llm_spec else None
    app = create_app(workflow, llm=llm, snapshot_path=_resolve(args, "snapshot"))
    uvicorn.run(app, host=str(_resolve(args, "host", "127.0.0.1")), port=int(_resolve(args, "port", 8700)))
    return 0


# --------------------------------------------------------- build-triplets

def cmd_build_triplets(args: argparse.Namespace) -> int:
    from figlang.figdata.store import load_dataset, save_triplets
    from figlang.figdata.triplets import build_triplets

    defaults = {"in": None, "out": None}
    if args.print_config:
        return _print_config(args, defaults)
    in_path = getattr(args, "in_path", None) or _resolve(args, "in")
    out_path = _resolve(args, "out")
    if not in_path or not out_path:
        raise ValueError("--in and --out are required")
    triplets = build_triplets(load_dataset(in_path))
    save_triplets(triplets, out_path)
    print(f"wrote {len(triplets)} triplets to {out_path}")
    write_manifest(Path(out_path).parent, "build-triplets", {}, inputs=[in_path], outputs=[out_path])
    return 0


# ---------------------------------------------------------------------- rq1

def cmd_rq1(args: argparse.Namespace) -> int:
    from figlang.figdata.store import load_dataset
    from figlang.geom.encoders import get_encoder
    from figlang.geom.rq1 import (
        comparisons_to_csv, evaluate_rq1, render_rq1_table, report_table_rows, report_to_csv,
    )
    from figlang.geom.svt import SvtConfig

    defaults = {"dataset": None, "encoder": "bow", "alpha": 0.001, "svt": True, "out": "runs/rq1",
                "fdr-q": 0.05}
    if args.print_config:
        return _print_config(args, defaults)
    dataset_path = _resolve(args, "dataset")
    if not dataset_path:
        raise ValueError("--dataset is required")
    out_dir = Path(_resolve(args, "out", "runs/rq1"))
    out_dir.mkdir(parents=True, exist_ok=True)
    encoder_spec = str(_resolve(args, "encoder", "bow"))
    alpha = float(_resolve(args, "alpha", 0.001))
    apply_svt = not args.no_svt

    dataset = load_dataset(dataset_path)
    encoder = get_encoder(encoder_spec)
    if hasattr(encoder, "fit"):
        texts = [t for item in dataset for t in (item.original, item.ems or "", item.dms or "") if t]
        encoder.fit(texts)
    cfg = SvtConfig(alpha=alpha, apply=apply_svt)
    report, comparisons = evaluate_rq1(dataset, encoder, cfg, float(_resolve(args, "fdr-q", 0.05)))

    report_csv = out_dir / "rq1_report.csv"
    comp_csv = out_dir / "rq1_comparisons.csv"
    table_txt = out_dir / "rq1_table.txt"
    report_json = out_dir / "rq1_report.json"
    report_to_csv(report, report_csv)
    comparisons_to_csv(comparisons, comp_csv)
    table_txt.write_text(render_rq1_table(report_table_rows(report)), encoding="utf-8")
    report_json.write_text(
        json.dumps(
            {
                "encoder": report.encoder_name,
                "svt": {"alpha": report.svt.alpha, "apply": report.svt.apply,
                        "re_add_mean": report.svt.re_add_mean},
                "fdr_q": report.fdr_q,
                "categories": {
                    cat: {
                        "percent_ems_wins": res.percent_ems_wins,
                        "p_value": res.p_value,
                        "p_adjusted": res.p_adjusted,
                        "reject": res.reject,
                        "cliffs_delta_abs": res.cliffs_delta_abs,
                        "magnitude": res.magnitude,
                        "n": res.n,
                    }
                    for cat, res in report.categories.items()
                },
                "n_items": report.n_items,
                "n_excluded": report.n_excluded,
                "notes": report.notes,
            },
            indent=2, sort_keys=True, allow_nan=True,
        ),
        encoding="utf-8",
    )
    print(table_txt.read_text(encoding="utf-8"))
    write_manifest(
        out_dir, "rq1",
        {"encoder": encoder_spec, "alpha": alpha, "svt": apply_svt},
        inputs=[dataset_path],
        outputs=[report_csv, comp_csv, table_txt, report_json],
    )
    return 0


# ------------------------------------------------------------------ finetune

def _load_triplet_file(path: str):
    from figlang.figdata.store import load_triplets

    return load_triplets(path)


def cmd_finetune(args: argparse.Namespace) -> int:
    from figlang.contrastive.train import TrainConfig, finetune
    from figlang.geom.encoders import get_encoder

    defaults = {"triplets": None, "encoder": "linear:dim=32,seed=0", "epochs": 3,
                "batch-size": 16, "learning-rate": 2e-5, "seed": 0, "scale": 1.0,
                "out": "runs/finetune"}
    if args.print_config:
        return _print_config(args, defaults)
    triplets_path = _resolve(args, "triplets")
    if not triplets_path:
        raise ValueError("--triplets is required")
    out_dir = Path(_resolve(args, "out", "runs/finetune"))
    out_dir.mkdir(parents=True, exist_ok=True)

    triplets = _load_triplet_file(triplets_path)
    encoder = get_encoder(str(_resolve(args, "encoder", defaults["encoder"])))
    if hasattr(encoder, "fit"):
        encoder.fit([t for tr in triplets for t in (tr.anchor, tr.positive, tr.negative)])
    cfg = TrainConfig(
        epochs=int(_resolve(args, "epochs", 3)),
        batch_size=int(_resolve(args, "batch-size", 16)),
        learning_rate=float(_resolve(args, "learning-rate", 2e-5)),
        seed=int(_resolve(args, "seed", 0)),
        similarity_scale=float(_resolve(args, "scale", 1.0)),
    )
    encoder, log = finetune(encoder, triplets, cfg)
    checkpoint = out_dir / "encoder.npz"
    if hasattr(encoder, "save"):
        encoder.save(str(checkpoint))
    log_path = out_dir / "training_log.jsonl"
    log.write_jsonl(log_path)
    print(f"epoch losses: {[round(l, 6) for l in log.losses]}")
    write_manifest(
        out_dir, "finetune", cfg.to_dict(), inputs=[triplets_path],
        outputs=[checkpoint, log_path], seeds={"train": cfg.seed},
    )
    return 0


# --------------------------------------------------------------------- bench

def cmd_bench(args: argparse.Namespace) -> int:
    from figlang.bench.analysis import error_analysis, export_error_analysis, render_error_summary
    from figlang.bench.comparison import TaskRunConfig, run_comparison
    from figlang.bench.datasets import (
        load_emotion_dataset, load_incivility_dataset, load_priority_dataset,
    )
    from figlang.bench.render import comparison_to_csv, render_comparison_table
    from figlang.contrastive.train import TrainConfig
    from figlang.geom.encoders import get_encoder

    defaults = {"task": None, "data": None, "triplets": None, "encoder": "linear:dim=32,seed=0",
                "epochs": 3, "batch-size": 16, "learning-rate": 0.01, "seed": 0,
                "sample-fraction": 0.25, "skip-fl": False, "out": "runs/bench"}
    if args.print_config:
        return _print_config(args, defaults)
    task_name = _resolve(args, "task")
    data_path = _resolve(args, "data")
    if not task_name or not data_path:
        raise ValueError("--task and --data are required")
    out_dir = Path(_resolve(args, "out", "runs/bench"))
    out_dir.mkdir(parents=True, exist_ok=True)

    if task_name == "emotion":
        dataset = load_emotion_dataset(data_path)
    elif task_name == "incivility":
        dataset = load_incivility_dataset(data_path)
    elif task_name == "priority":
        dataset = load_priority_dataset(
            data_path, float(_resolve(args, "sample-fraction", 0.25)), int(_resolve(args, "seed", 0))
        )
    else:
        raise ValueError(f"unknown task {task_name!r} (emotion, incivility, priority)")

    triplets_path = _resolve(args, "triplets")
    skip_fl = bool(args.skip_fl)
    triplets = _load_triplet_file(triplets_path) if triplets_path else []
    if not triplets and not skip_fl:
        raise ValueError("--triplets is required unless --skip-fl is set")

    encoder = get_encoder(str(_resolve(args, "encoder", defaults["encoder"])))
    if hasattr(encoder, "fit"):
        corpus = [item.text for item in dataset.items]
        corpus.extend(t for tr in triplets for t in (tr.anchor, tr.positive, tr.negative))
        encoder.fit(corpus)
    train_cfg = TrainConfig(
        epochs=int(_resolve(args, "epochs", 3)),
        batch_size=int(_resolve(args, "batch-size", 16)),
        learning_rate=float(_resolve(args, "learning-rate", 0.01)),
        seed=int(_resolve(args, "seed", 0)),
    )
    task_cfg = TaskRunConfig(
        head_seed=int(_resolve(args, "seed", 0)),
        split_seed=int(_resolve(args, "seed", 0)),
        fl_enabled=not skip_fl,
    )
    report = run_comparison(dataset, encoder, triplets, train_cfg, task_cfg)

    table = render_comparison_table(report)
    print(table)
    table_path = out_dir / "comparison_table.txt"
    table_path.write_text(table, encoding="utf-8")
    csv_path = out_dir / "comparison.csv"
    comparison_to_csv(report, csv_path)
    json_path = out_dir / "comparison.json"
    json_path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True), encoding="utf-8")

    analysis = error_analysis(
        report.golds, report.baseline.predictions, report.fl.predictions,
        multilabel=dataset.multilabel, ids=report.test_ids,
    )
    print(render_error_summary(analysis))
    errors_path = out_dir / "error_analysis.jsonl"
    export_error_analysis(
        analysis, errors_path,
        texts_by_id=dict(zip(report.test_ids, report.test_texts)),
        base_preds_by_id={i: list(p) for i, p in zip(report.test_ids, report.baseline.predictions)},
        fl_preds_by_id={i: list(p) for i, p in zip(report.test_ids, report.fl.predictions)},
    )
    write_manifest(
        out_dir, "bench",
        {"task": task_name, "train": train_cfg.to_dict(), "run": task_cfg.to_dict()},
        inputs=[p for p in (data_path, triplets_path) if p],
        outputs=[table_path, csv_path, json_path, errors_path],
        seeds={"seed": int(_resolve(args, "seed", 0))},
    )
    return 0


# ---------------------------------------------------------------- prevalence

def cmd_prevalence(args: argparse.Namespace) -> int:
    from figlang.prevalence.matcher import ExpressionLexicon, build_matcher
    from figlang.prevalence.scan import report_to_csv, scan, write_chart_data

    defaults = {"corpus": None, "lexicon": None, "threshold": 10, "out": "runs/prevalence"}
    if args.print_config:
        return _print_config(args, defaults)
    corpus_path = _resolve(args, "corpus")
    lexicon_path = _resolve(args, "lexicon")
    if not corpus_path or not lexicon_path:
        raise ValueError("--corpus and --lexicon are required")
    out_dir = Path(_resolve(args, "out", "runs/prevalence"))
    out_dir.mkdir(parents=True, exist_ok=True)

    lexicon = ExpressionLexicon.from_csv(lexicon_path)
    matcher = build_matcher(lexicon)
    def sentences():
        with open(corpus_path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    yield json.loads(line)

    report = scan(sentences(), matcher, low_freq_threshold=int(_resolve(args, "threshold", 10)))
    report_to_csv(report, out_dir)
    write_chart_data(report, out_dir)
    print(
        f"{report.sentences_total} sentences: {report.pct_se:.2f}% SE-specific, "
        f"{report.pct_general:.2f}% general, {report.pct_both:.2f}% both"
    )
    write_manifest(
        out_dir, "prevalence", {"threshold": report.low_freq_threshold},
        inputs=[corpus_path, lexicon_path],
        outputs=[out_dir / "prevalence_overall.csv", out_dir / "prevalence_per_repo.csv",
                 out_dir / "prevalence_frequency.csv"],
    )
    return 0


# -------------------------------------------------------------------- report

def cmd_report(args: argparse.Namespace) -> int:
    from figlang.geom.rq1 import render_rq1_table
    from figlang.stats import benjamini_hochberg

    defaults = {"kind": None, "out": "runs/report"}
    if args.print_config:
        return _print_config(args, defaults)
    kind = _resolve(args, "kind")
    out_dir = Path(_resolve(args, "out", "runs/report"))
    out_dir.mkdir(parents=True, exist_ok=True)
    inputs = args.inputs or []
    if not kind or not inputs:
        raise ValueError("--kind and at least one input file are required")

    if kind == "rq1":
        # A joint multi-model table: the BH family spans every test in it.
        loaded = [json.loads(Path(p).read_text(encoding="utf-8")) for p in inputs]
        family = []
        for data in loaded:
            for cat, res in sorted(data["categories"].items()):
                p = res["p_value"]
                if p is not None and not (isinstance(p, float) and p != p):
                    family.append((data["encoder"], cat, p))
        adjusted = benjamini_hochberg([p for _, _, p in family], loaded[0].get("fdr_q", 0.05))
        adj_map = {(enc, cat): adj for (enc, cat, _), (adj, _) in zip(family, adjusted)}
        rows = {}
        for data in loaded:
            cats = {}
            for cat, res in data["categories"].items():
                adjusted_p = adj_map.get((data["encoder"], cat))
                cats[cat] = {
                    "percent": res["percent_ems_wins"],
                    "p_value": float("nan") if adjusted_p is None else adjusted_p,
                    "delta_abs": res["cliffs_delta_abs"],
                }
            rows[data["encoder"]] = cats
        table = render_rq1_table(rows)
    elif kind == "bench":
        from figlang.bench.render import render_score_rows

        parts = []
        for path in inputs:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
            labels = tuple(data["label_space"])
            parts.append(
                render_score_rows(
                    data["baseline"]["name"] if data["baseline"]["name"] != "baseline"
                    else data["metadata"].get("encoder", "model"),
                    labels,
                    data["baseline"]["per_class_f1"],
                    data["fl"]["per_class_f1"],
                    data["baseline"]["micro_f1"],
                    data["fl"]["micro_f1"],
                )
            )
        table = "\n".join(parts)
    else:
        raise ValueError(f"unknown report kind {kind!r}")

    table_path = out_dir / f"{kind}_table.txt"
    table_path.write_text(table, encoding="utf-8")
    print(table)
    write_manifest(out_dir, "report", {"kind": kind}, inputs=inputs, outputs=[table_path])
    return 0


# ---------------------------------------------------------------------- main

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML config file (defaults layer)")
    parser.add_argument("--print-config", action="store_true", help="print effective config and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figlang", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="fetch GitHub comments into a raw store")
    _add_common(p)
    p.add_argument("--repo")
    p.add_argument("--kind", choices=["issue", "pull_request"])
    p.add_argument("--limit", type=int)
    p.add_argument("--since")
    p.add_argument("--until")
    p.add_argument("--out")
    p.add_argument("--replay", help="recorded API fixture for offline replay")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("screen", help="split, filter, and flag candidate sentences")
    _add_common(p)
    p.add_argument("--comments")
    p.add_argument("--out")
    p.add_argument("--min-words", type=int)
    p.add_argument("--metaphor-lexicon")
    p.add_argument("--idiom-lexicon")
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("gen-dms", help="generate DMS candidates via an LLM client")
    _add_common(p)
    p.add_argument("--dataset")
    p.add_argument("--out")
    p.add_argument("--llm")
    p.add_argument("--record", help="record prompt/response transcript here")
    p.add_argument("--service-url", help="act as a thin client of a running annotation service")
    p.set_defaults(func=cmd_gen_dms)

    p = sub.add_parser("serve-annotation", help="run the annotation HTTP service")
    _add_common(p)
    p.add_argument("--dataset")
    p.add_argument("--events")
    p.add_argument("--annotators")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.add_argument("--lease-seconds", type=float)
    p.add_argument("--llm", help="auto-generate DMS candidates after EMS (stub, replay:PATH, http[:MODEL])")
    p.add_argument("--snapshot")
    p.set_defaults(func=cmd_serve_annotation)

    p = sub.add_parser("build-triplets", help="emit contrastive triplets from annotations")
    _add_common(p)
    p.add_argument("--in", dest="in_path")
    p.add_argument("--out")
    p.set_defaults(func=cmd_build_triplets)

    p = sub.add_parser("rq1", help="similarity-ordering evaluation over annotated items")
    _add_common(p)
    p.add_argument("--dataset")
    p.add_argument("--encoder")
    p.add_argument("--alpha", type=float)
    p.add_argument("--no-svt", action="store_true")
    p.add_argument("--fdr-q", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rq1)

    p = sub.add_parser("finetune", help="contrastive fine-tuning on triplets")
    _add_common(p)
    p.add_argument("--triplets")
    p.add_argument("--encoder")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--scale", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_finetune)

    p = sub.add_parser("bench", help="baseline vs FL comparison on a task dataset")
    _add_common(p)
    p.add_argument("--task")
    p.add_argument("--data")
    p.add_argument("--triplets")
    p.add_argument("--encoder")
    p.add_argument("--epochs", type=int)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--learning-rate", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--sample-fraction", type=float)
    p.add_argument("--skip-fl", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("prevalence", help="scan a corpus for known figurative expressions")
    _add_common(p)
    p.add_argument("--corpus")
    p.add_argument("--lexicon")
    p.add_argument("--threshold", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_prevalence)

    p = sub.add_parser("report", help="render text tables from stored results")
    _add_common(p)
    p.add_argument("--kind")
    p.add_argument("--out")
    p.add_argument("inputs", nargs="*")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # noqa: BLE001 - single CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        logger.debug("command failed", exc_info=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
