"""Command-line interface: index, query, eval, gen-corpus, serve.

Every failure exits nonzero after printing a single machine-parsable line
``error: <code>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .builder import build_index
from .config import EngineConfig, config_to_dict, load_config
from .errors import CbirError, GroundTruthError, InvalidArgumentError
from .evaluation import evaluate_corpus, load_ground_truth
from .imaging import decode_image
from .report import report_to_json, write_eval_report
from .retrieval import MODES, RetrievalResult, query
from .store import load_index, save_index
from .synth import generate_corpus


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cbir",
        description="Content-based image retrieval: color + GLCM texture features, "
        "MLE texture classification, FCM pre-clustering, Euclidean ranking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build and save an index over an image directory")
    p_index.add_argument("--input", required=True, help="directory of images to index")
    p_index.add_argument("--config", help="flat key-value config file (defaults when omitted)")
    p_index.add_argument("--output", required=True, help="path for the index file")

    p_query = sub.add_parser("query", help="rank indexed images against a query image")
    p_query.add_argument("--index", required=True, help="index file path")
    p_query.add_argument("--image", required=True, help="query image file (PNG/JPEG)")
    p_query.add_argument("--k", type=int, default=10, help="number of results (default 10)")
    p_query.add_argument("--mode", choices=MODES, default="clustered")
    p_query.add_argument("--json", action="store_true", help="print the structured document")

    p_eval = sub.add_parser("eval", help="precision/recall evaluation against ground truth")
    p_eval.add_argument("--index", required=True)
    p_eval.add_argument("--ground-truth", required=True, help="TSV: query_id<TAB>rel1,rel2,...")
    p_eval.add_argument("--ks", default="5,10,20", help="comma-separated cutoffs (default 5,10,20)")
    p_eval.add_argument("--mode", choices=MODES, default="clustered")
    p_eval.add_argument("--out", help="directory for report.json, the TSV table and the PR figure")

    p_gen = sub.add_parser("gen-corpus", help="write the synthetic 3x3 test corpus")
    p_gen.add_argument("--output", required=True, help="corpus directory")
    p_gen.add_argument("--per-cell", type=int, default=30, help="images per cell (default 30)")
    p_gen.add_argument("--seed", type=int, default=7)
    p_gen.add_argument("--size", type=int, default=128, help="image side in pixels")

    p_serve = sub.add_parser("serve", help="start the HTTP query API")
    p_serve.add_argument("--index", required=True)
    p_serve.add_argument("--images", required=True, help="directory the image ids resolve against")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")

    return parser


def _result_json(result: RetrievalResult) -> str:
    doc = {
        "results": [
            {"id": e.image_id, "distance": e.distance, "rank": e.rank}
            for e in result.entries
        ],
        "candidates_examined": result.candidates_examined,
        "mode": result.mode,
    }
    return json.dumps(doc, sort_keys=True, indent=2)


def _cmd_index(args) -> int:
    config = load_config(args.config) if args.config else EngineConfig()
    result = build_index(args.input, config)
    save_index(result.index, args.output)
    print(f"indexed {len(result.index.entries)} images -> {args.output}")
    for skip in result.skipped:
        print(f"skipped {skip.path} ({skip.reason})")
    return 0


def _cmd_query(args) -> int:
    index = load_index(args.index)
    try:
        data = Path(args.image).read_bytes()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read query image {args.image}: {exc}") from exc
    result = query(index, decode_image(data), args.k, args.mode)
    if args.json:
        print(_result_json(result))
        return 0
    print(f"mode={result.mode} candidates_examined={result.candidates_examined}")
    width = max([len(e.image_id) for e in result.entries], default=2)
    print(f"{'rank':>4}  {'id':<{width}}  distance")
    for entry in result.entries:
        print(f"{entry.rank:>4}  {entry.image_id:<{width}}  {entry.distance:.6f}")
    return 0


def _parse_ks(raw: str) -> list[int]:
    try:
        ks = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise InvalidArgumentError(f"cannot parse cutoffs {raw!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise InvalidArgumentError(f"cutoffs must all be >= 1, got {raw!r}")
    return ks


def _cmd_eval(args) -> int:
    index = load_index(args.index)
    relevance = load_ground_truth(args.ground_truth)
    missing = sorted(q for q in relevance if index.entry(q) is None)
    if missing:
        raise GroundTruthError(
            f"{len(missing)} ground-truth queries are not in the index "
            f"(first: {missing[0]!r})"
        )
    ks = _parse_ks(args.ks)
    report = evaluate_corpus(index, sorted(relevance.items()), ks, args.mode)
    print(f"mode={report.mode} queries={len(report.per_query)} "
          f"mean_candidates_ratio={report.mean_candidates_ratio:.4f}")
    print(f"{'k':>4}  {'macro_precision':>15}  {'macro_recall':>12}")
    for point in report.macro:
        print(f"{point.k:>4}  {point.precision:>15.6f}  {point.recall:>12.6f}")
    if args.out:
        paths = write_eval_report(report, args.out, config_to_dict(index.config))
        for path in paths:
            print(f"wrote {path}")
    else:
        sys.stdout.write(report_to_json(report, config_to_dict(index.config)))
    return 0


def _cmd_gen_corpus(args) -> int:
    manifest = generate_corpus(args.output, per_cell=args.per_cell, seed=args.seed, size=args.size)
    print(f"wrote {len(manifest.images)} images -> {manifest.images_dir}")
    print(f"wrote ground truth -> {manifest.ground_truth_path}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    index = load_index(args.index)
    app = create_app(index, args.images)
    print(f"serving {len(index.entries)} entries on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


_COMMANDS = {
    "index": _cmd_index,
    "query": _cmd_query,
    "eval": _cmd_eval,
    "gen-corpus": _cmd_gen_corpus,
    "serve": _cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CbirError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
