"""Command-line entry point: ingest, score, align, rate, analyze, report,
serve and the end-to-end run."""

import argparse
import json
import logging
import os
import sys
from dataclasses import asdict

from . import _kernels
from .alignment import mwer_resegment_text, single_sequence
from .analysis import (
    cr_vs_cri_points,
    recommendations,
    run_table1,
    run_table2,
    scatter_points,
    index_scores,
    VariantComparison,
)
from .corpus import iter_jsonl, load_corpus, load_sessions
from .metrics import ExternalScorer, MetricEngine, ScoreCache
from .ratings import aggregate_ratings, cr, cri
from .report import write_report
from .service import serve as make_server
from .types import (
    MetricVariant,
    ScoreRecord,
    TABLE1_VARIANTS,
    TABLE2_VARIANTS,
    ValidationError,
)

log = logging.getLogger("ssteval")


class StageError(RuntimeError):
    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")


# -------------------------------------------------------------------------
# configuration

DEFAULT_CONFIG = {
    "language": "de",
    "detokenize_systems": [],
    "scorers": {},
    "cache_dir": None,
    "out_dir": "out",
    "subsets": ["both", "Common", "NonNative"],
    "aggregations": ["averaged", "all_ratings"],
    "cr_definition": "CR",
    "thresholds": [0.05, 0.1],
    "variants": None,
    "mwer_lowercase": False,
    "steiger_method": "williams",
}


def load_config(path):
    with open(path, encoding="utf-8") as f:
        config = json.load(f)
    base = os.path.dirname(os.path.abspath(path))
    merged = dict(DEFAULT_CONFIG)
    merged.update(config)
    paths = merged.get("paths") or {}
    for key, value in paths.items():
        paths[key] = os.path.normpath(os.path.join(base, value))
    merged["paths"] = paths
    for key in ("cache_dir", "out_dir"):
        if merged.get(key):
            merged[key] = os.path.normpath(os.path.join(base, merged[key]))
    return merged


def config_variants(config):
    labels = config.get("variants")
    if not labels:
        # the ordered comparison table plus the headline-table columns
        universe = list(TABLE2_VARIANTS)
        for v in TABLE1_VARIANTS:
            if v not in universe:
                universe.append(v)
        return universe
    return [MetricVariant.parse(label) for label in labels]


def _load_store(config, with_sessions=True):
    paths = config["paths"]
    for required in ("documents", "candidates", "ref_translation", "ref_interpreting"):
        if required not in paths:
            raise ValidationError(f"config paths.{required} missing")
        if not os.path.exists(paths[required]):
            raise ValidationError(f"input file not found: {paths[required]}")
    sessions_path = paths.get("sessions") if with_sessions else None
    if with_sessions and sessions_path and not os.path.exists(sessions_path):
        raise ValidationError(f"input file not found: {sessions_path}")
    return load_corpus(
        paths["documents"],
        paths["candidates"],
        paths["ref_translation"],
        paths["ref_interpreting"],
        sessions_path,
        detokenize_systems=set(config.get("detokenize_systems") or ()),
        language=config.get("language", "de"),
    )


def _engine(config, extra_scorers=()):
    scorers = {
        name: ExternalScorer(name, command)
        for name, command in (config.get("scorers") or {}).items()
    }
    for spec in extra_scorers:
        name, _, command = spec.partition("=")
        if not command:
            raise ValidationError(f"--scorer expects NAME=COMMAND, got {spec!r}")
        scorers[name] = ExternalScorer(name, command)
    cache = ScoreCache(config["cache_dir"]) if config.get("cache_dir") else None
    return scorers, cache


def _write_jsonl(path, records):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def score_record_to_json(rec):
    return {
        "metric": rec.variant.metric,
        "reference_mode": rec.variant.reference_mode,
        "alignment_mode": rec.variant.alignment_mode,
        "doc_id": rec.doc_id,
        "system": rec.system_id,
        "latency": rec.latency,
        "value": rec.value,
    }


def score_record_from_json(rec):
    return ScoreRecord(
        variant=MetricVariant(rec["metric"], rec["reference_mode"], rec["alignment_mode"]),
        doc_id=rec["doc_id"],
        system_id=rec["system"],
        latency=rec["latency"],
        value=float(rec["value"]),
    )


def comparison_to_dict(comparison):
    d = asdict(comparison)
    d["clusters"] = {str(t): b for t, b in comparison.clusters.items()}
    return d


def comparison_from_dict(d):
    return VariantComparison(
        subset=d["subset"],
        aggregation=d["aggregation"],
        cr_definition=d["cr_definition"],
        n=d["n"],
        variants=d["variants"],
        r_values=d["r_values"],
        p_values=d["p_values"],
        pairwise_t=d["pairwise_t"],
        pairwise_p=d["pairwise_p"],
        clusters={float(t): b for t, b in d["clusters"].items()},
    )


# -------------------------------------------------------------------------
# stages

def stage_ingest(config, out_dir=None):
    store = _load_store(config)
    subset_counts = {}
    for doc in store.documents.values():
        subset_counts[doc.subset] = subset_counts.get(doc.subset, 0) + 1
    summary = {
        "documents": len(store.documents),
        "documents_by_subset": dict(sorted(subset_counts.items())),
        "candidates": len(store.candidates),
        "systems": store.systems,
        "latencies": store.latencies,
        "sessions": len(store.sessions),
    }
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        with open(os.path.join(out_dir, "corpus_summary.json"), "w", encoding="utf-8") as f:
            json.dump(summary, f, ensure_ascii=False, indent=2)
            f.write("\n")
    return store, summary


def stage_score(config, store, variants, extra_scorers=()):
    scorers, cache = _engine(config, extra_scorers)
    engine = MetricEngine(
        store,
        scorers=scorers,
        cache=cache,
        mwer_lowercase=bool(config.get("mwer_lowercase")),
    )
    return engine.score_all(variants)


def stage_rate(store):
    aggregated = aggregate_ratings(store.sessions)
    records = [
        {
            "doc_id": s.doc_id,
            "system": s.system_id,
            "latency": s.latency,
            "cr": s.cr,
            "cri": s.cri,
            "n_sessions": s.n_sessions,
        }
        for _, s in sorted(aggregated.items())
    ]
    return records


def stage_analyze(config, store, score_records):
    score_index = index_scores(score_records)
    cr_definition = config["cr_definition"]
    variants = [v for v in config_variants(config) if v in score_index]
    if not variants:
        raise ValidationError("no analyzed variants have scores")

    result = {
        "cr_definition": cr_definition,
        "table1": None,
        "comparisons": [],
        "scatters": [],
        "cr_vs_cri": None,
        "recommendations": None,
    }

    if all(v in score_index for v in TABLE1_VARIANTS):
        result["table1"] = run_table1(
            store, score_index, cr_definition,
            subsets=tuple(config["subsets"]),
            aggregations=tuple(config["aggregations"]),
        )

    for subset in config["subsets"]:
        for aggregation in config["aggregations"]:
            comparison = run_table2(
                store, score_index, variants,
                subset=subset,
                aggregation=aggregation,
                cr_definition=cr_definition,
                thresholds=tuple(config["thresholds"]),
                method=config.get("steiger_method", "williams"),
            )
            result["comparisons"].append(comparison)
            if subset == "both" and aggregation == "averaged":
                result["recommendations"] = recommendations(comparison)

    for variant in TABLE1_VARIANTS:
        if variant not in score_index:
            continue
        for aggregation in config["aggregations"]:
            result["scatters"].append({
                "subset": "both",
                "aggregation": aggregation,
                "variant": variant.label,
                "points": scatter_points(
                    store, score_index, variant, aggregation, cr_definition
                ),
            })

    points, corr = cr_vs_cri_points(store)
    result["cr_vs_cri"] = {
        "points": points,
        "r": corr.r if corr else None,
        "p": corr.p if corr else None,
    }
    return result


def analysis_to_json(result):
    out = dict(result)
    out["comparisons"] = [comparison_to_dict(c) for c in result["comparisons"]]
    return out


def analysis_from_json(data):
    result = dict(data)
    result["comparisons"] = [comparison_from_dict(c) for c in data["comparisons"]]
    return result


# -------------------------------------------------------------------------
# commands

def cmd_ingest(args):
    config = load_config(args.config)
    _, summary = stage_ingest(config, out_dir=args.out_dir or config["out_dir"])
    print(json.dumps(summary, ensure_ascii=False, indent=2))
    return 0


def cmd_score(args):
    config = load_config(args.config)
    store = _load_store(config)
    if args.variants:
        variants = [MetricVariant.parse(v) for v in args.variants.split(",")]
    else:
        variants = config_variants(config)
    records = stage_score(config, store, variants, args.scorer or ())
    out_dir = args.out_dir or config["out_dir"]
    path = os.path.join(out_dir, "scores.jsonl")
    _write_jsonl(path, [score_record_to_json(r) for r in records])
    print(f"{len(records)} score records -> {path}")
    return 0


def cmd_align(args):
    with open(args.hyp, encoding="utf-8") as f:
        hyp_lines = [line.rstrip("\n") for line in f if line.strip()]
    with open(args.refs, encoding="utf-8") as f:
        ref_lines = [line.rstrip("\n") for line in f if line.strip()]
    if not ref_lines:
        raise ValidationError(f"{args.refs}: no reference segments")
    if args.mode == "singleseq":
        segments = [single_sequence(hyp_lines)]
        summary = {"mode": "singleseq", "segments": 1}
    else:
        hyp_text = " ".join(hyp_lines)
        segments, cost = mwer_resegment_text(
            hyp_text, ref_lines, lowercase=args.lowercase, backend=args.backend
        )
        summary = {
            "mode": "mwer",
            "segments": len(segments),
            "total_edit_cost": cost,
            "hyp_tokens": len(hyp_text.split()),
            "ref_tokens": sum(len(r.split()) for r in ref_lines),
            "kernel": _kernels.get_backend(args.backend).BACKEND_NAME,
        }
    out = args.out or "-"
    body = "".join(seg + "\n" for seg in segments)
    if out == "-":
        sys.stdout.write(body)
    else:
        os.makedirs(os.path.dirname(out) or ".", exist_ok=True)
        with open(out, "w", encoding="utf-8", newline="\n") as f:
            f.write(body)
        with open(out + ".summary.json", "w", encoding="utf-8", newline="\n") as f:
            json.dump(summary, f, ensure_ascii=False, indent=2)
            f.write("\n")
    print(json.dumps(summary, ensure_ascii=False), file=sys.stderr)
    return 0


def cmd_rate(args):
    sessions = load_sessions(args.sessions, documents=None)
    if args.per_session:
        records = [
            {
                "evaluator": s.evaluator_id,
                "doc_id": s.doc_id,
                "system": s.system_id,
                "latency": s.latency,
                "cr": cr(s),
                "cri": cri(s),
                "n_clicks": len(s.clicks),
            }
            for s in sessions
        ]
    else:
        records = [
            {
                "doc_id": s.doc_id,
                "system": s.system_id,
                "latency": s.latency,
                "cr": s.cr,
                "cri": s.cri,
                "n_sessions": s.n_sessions,
            }
            for _, s in sorted(aggregate_ratings(sessions).items())
        ]
    if args.out:
        _write_jsonl(args.out, records)
        print(f"{len(records)} rating records -> {args.out}")
    else:
        for rec in records:
            print(json.dumps(rec, ensure_ascii=False))
    return 0


def _apply_analysis_overrides(config, args):
    if getattr(args, "subset", None):
        config["subsets"] = args.subset
    if getattr(args, "cr_definition", None):
        config["cr_definition"] = args.cr_definition
    if getattr(args, "threshold", None):
        config["thresholds"] = [float(t) for t in args.threshold]
    if getattr(args, "variants", None):
        config["variants"] = args.variants.split(",")
    if getattr(args, "out_dir", None):
        config["out_dir"] = args.out_dir


def cmd_analyze(args):
    config = load_config(args.config)
    _apply_analysis_overrides(config, args)
    store = _load_store(config)
    scores_path = args.scores or os.path.join(config["out_dir"], "scores.jsonl")
    if not os.path.exists(scores_path):
        raise ValidationError(
            f"scores file not found: {scores_path} (run `ssteval score` first)"
        )
    score_records = [score_record_from_json(rec) for _, rec in iter_jsonl(scores_path)]
    result = stage_analyze(config, store, score_records)
    out_path = os.path.join(config["out_dir"], "analysis.json")
    os.makedirs(config["out_dir"], exist_ok=True)
    with open(out_path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(analysis_to_json(result), f, ensure_ascii=False, indent=2)
        f.write("\n")
    print(f"analysis -> {out_path}")
    return 0


def cmd_report(args):
    config = load_config(args.config)
    _apply_analysis_overrides(config, args)
    path = args.analysis or os.path.join(config["out_dir"], "analysis.json")
    if not os.path.exists(path):
        raise ValidationError(f"analysis file not found: {path} (run `ssteval analyze`)")
    with open(path, encoding="utf-8") as f:
        result = analysis_from_json(json.load(f))
    write_report(result, config["out_dir"])
    print(f"report -> {config['out_dir']}")
    return 0


def cmd_serve(args):
    config = load_config(args.config)
    store = _load_store(config, with_sessions=False)
    server = make_server(
        store, args.state_dir, port=args.port, ui_dir=args.ui_dir, seed=args.seed
    )
    print(f"serving on http://127.0.0.1:{args.port} (state: {args.state_dir})")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def cmd_run(args):
    """End to end: ingest -> score -> rate -> analyze -> report."""
    config = load_config(args.config)
    _apply_analysis_overrides(config, args)
    out_dir = config["out_dir"]

    def stage(name, fn, *a, **kw):
        try:
            return fn(*a, **kw)
        except Exception as e:
            raise StageError(name, e) from e

    store, summary = stage("ingest", stage_ingest, config, out_dir)
    log.info("ingest: %s", summary)
    variants = config_variants(config)
    records = stage("score", stage_score, config, store, variants, args.scorer or ())
    _write_jsonl(
        os.path.join(out_dir, "scores.jsonl"),
        [score_record_to_json(r) for r in records],
    )
    ratings = stage("rate", stage_rate, store)
    _write_jsonl(os.path.join(out_dir, "ratings.jsonl"), ratings)
    result = stage("analyze", stage_analyze, config, store, records)
    with open(os.path.join(out_dir, "analysis.json"), "w", encoding="utf-8", newline="\n") as f:
        json.dump(analysis_to_json(result), f, ensure_ascii=False, indent=2)
        f.write("\n")
    stage("report", write_report, result, out_dir)
    print(f"pipeline complete -> {out_dir}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ssteval",
        description="Score simultaneous speech translation outputs against "
                    "translation/interpreting references and correlate with "
                    "continuous human ratings.",
    )
    parser.add_argument("--verbose", "-v", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="load and validate the corpus")
    p.add_argument("--config", required=True)
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_ingest)

    p = sub.add_parser("score", help="compute metric variant scores")
    p.add_argument("--config", required=True)
    p.add_argument("--variants", help="comma-separated variant labels")
    p.add_argument("--scorer", action="append", metavar="NAME=COMMAND")
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("align", help="resegment a hypothesis to a reference segmentation")
    p.add_argument("--hyp", required=True, help="hypothesis file, one segment per line")
    p.add_argument("--refs", required=True, help="reference file, one segment per line")
    p.add_argument("--mode", choices=("mwer", "singleseq"), default="mwer")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--backend", choices=("compiled", "python"))
    p.add_argument("--out", help="output file ('-' for stdout)")
    p.set_defaults(fn=cmd_align)

    p = sub.add_parser("rate", help="score rating sessions (CR and CRi)")
    p.add_argument("--sessions", required=True)
    p.add_argument("--per-session", action="store_true",
                   help="one record per session instead of per candidate")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_rate)

    p = sub.add_parser("analyze", help="correlations, pairwise tests, clusters")
    p.add_argument("--config", required=True)
    p.add_argument("--scores", help="scores.jsonl (default: <out-dir>/scores.jsonl)")
    p.add_argument("--subset", action="append", choices=("both", "Common", "NonNative"))
    p.add_argument("--variants")
    p.add_argument("--cr-definition", choices=("CR", "CRi"))
    p.add_argument("--threshold", action="append")
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("report", help="render tables and figures from an analysis")
    p.add_argument("--config", required=True)
    p.add_argument("--analysis", help="analysis.json (default: <out-dir>/analysis.json)")
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("serve", help="host the rating-collection service")
    p.add_argument("--config", required=True)
    p.add_argument("--state-dir", required=True)
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--ui-dir", help="directory with the built rating UI")
    p.add_argument("--seed", type=int)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("run", help="end-to-end pipeline")
    p.add_argument("--config", required=True)
    p.add_argument("--scorer", action="append", metavar="NAME=COMMAND")
    p.add_argument("--subset", action="append", choices=("both", "Common", "NonNative"))
    p.add_argument("--variants")
    p.add_argument("--cr-definition", choices=("CR", "CRi"))
    p.add_argument("--threshold", action="append")
    p.add_argument("--out-dir")
    p.set_defaults(fn=cmd_run)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.fn(args)
    except StageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValidationError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
