"""Command-line interface: detect communities, evaluate covers, census stats.

Exit codes: 0 success, 1 IO or validation failure, 2 usage error. Every JSON
report embeds the run manifest that produced it; community files use the
plain one-community-per-line text format with original node ids.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

from . import __version__
from .evaluation import evaluate
from .graph import (
    AttributedGraph,
    FeatureKind,
    GraphParseError,
    GraphValidationError,
    attach_features,
    load_communities,
    load_edge_list,
    write_communities,
)
from .local_search import LsfConfig, Mode, run
from .triangles import census

__all__ = ["main", "RunManifest"]


@dataclass
class RunManifest:
    command: str
    edges: str
    features: str | None
    feature_kind: str | None
    mode: str | None
    alpha: float | None
    max_rounds: int | None
    min_feature_edges: int | None
    tf_dedup: bool | None
    tool_version: str
    duration_seconds: float

    def to_dict(self) -> dict:
        return asdict(self)


def _load_graph(args) -> AttributedGraph:
    graph = load_edge_list(args.edges)
    if getattr(args, "features", None):
        if not getattr(args, "feature_kind", None):
            raise GraphValidationError("--feature-kind is required with --features")
        kind = FeatureKind(args.feature_kind)
        graph = attach_features(graph, args.features, kind)
    return graph


def _manifest(args, command, started) -> RunManifest:
    return RunManifest(
        command=command,
        edges=args.edges,
        features=getattr(args, "features", None),
        feature_kind=getattr(args, "feature_kind", None),
        mode=getattr(args, "mode", None),
        alpha=getattr(args, "alpha", None),
        max_rounds=getattr(args, "max_rounds", None),
        min_feature_edges=getattr(args, "min_feature_edges", None),
        tf_dedup=getattr(args, "tf_dedup", None),
        tool_version=__version__,
        duration_seconds=round(time.perf_counter() - started, 6),
    )


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_detect(args) -> int:
    started = time.perf_counter()
    graph = _load_graph(args)
    config = LsfConfig(
        alpha=args.alpha,
        max_rounds=args.max_rounds,
        mode=Mode(args.mode),
        min_feature_edges=args.min_feature_edges,
        dedup_dual_triangles=args.tf_dedup,
        workers=args.workers,
    )
    result = run(graph, config)
    write_communities(args.out, result.communities, graph)
    trace_path = args.trace or (args.out + ".trace.jsonl")
    manifest = _manifest(args, "detect", started)
    with open(trace_path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"manifest": manifest.to_dict()}, sort_keys=True) + "\n")
        for rec in result.trace:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    print(
        f"detected {len(result.communities)} communities in "
        f"{result.state.round} rounds -> {args.out}"
    )
    return 0


def cmd_eval(args) -> int:
    started = time.perf_counter()
    graph = _load_graph(args)
    detected = load_communities(args.detected, graph)
    truth = load_communities(args.ground_truth, graph)
    report = evaluate(graph, detected, truth)
    payload = {
        "manifest": _manifest(args, "eval", started).to_dict(),
        "metrics": report.to_dict(),
    }
    _emit(payload, args.out)
    return 0


def cmd_stats(args) -> int:
    started = time.perf_counter()
    graph = _load_graph(args)
    truth = load_communities(args.ground_truth, graph)
    report = census(graph, truth, args.min_feature_edges)
    payload = {
        "manifest": _manifest(args, "stats", started).to_dict(),
        "census": report.to_dict(),
    }
    _emit(payload, args.out)
    return 0


def _alpha_type(value: str) -> float:
    x = float(value)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in [0, 1]")
    return x


def _rounds_type(value: str) -> int:
    x = int(value)
    if x < 1:
        raise argparse.ArgumentTypeError("max-rounds must be >= 1")
    return x


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tricomm",
        description="Triangle-oriented community detection for attributed networks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_args(p, features_required=False):
        p.add_argument("--edges", required=True, help="edge list file (two id columns)")
        p.add_argument(
            "--features",
            required=features_required,
            help="node feature file (dense or idx:val sparse rows)",
        )
        p.add_argument(
            "--feature-kind",
            choices=[FeatureKind.BINARY.value, FeatureKind.CONTINUOUS.value],
            help="how feature values are interpreted",
        )

    p_detect = sub.add_parser("detect", help="run the local search and write communities")
    add_graph_args(p_detect)
    p_detect.add_argument(
        "--mode",
        choices=[Mode.PARTITION.value, Mode.OVERLAP.value],
        default=Mode.PARTITION.value,
    )
    p_detect.add_argument("--alpha", type=_alpha_type, default=0.2)
    p_detect.add_argument("--max-rounds", type=_rounds_type, default=20)
    p_detect.add_argument(
        "--min-feature-edges", type=int, choices=[0, 1, 2, 3], default=2
    )
    p_detect.add_argument(
        "--tf-dedup",
        action="store_true",
        help="count a triple that is both triangle types once instead of twice",
    )
    p_detect.add_argument("--workers", type=int, default=1)
    p_detect.add_argument("--out", required=True, help="output community file")
    p_detect.add_argument("--trace", help="round trace path (default: <out>.trace.jsonl)")
    p_detect.set_defaults(func=cmd_detect)

    p_eval = sub.add_parser("eval", help="score a detected cover against a ground truth")
    add_graph_args(p_eval)
    p_eval.add_argument("--detected", required=True)
    p_eval.add_argument("--ground-truth", required=True)
    p_eval.add_argument("--out")
    p_eval.set_defaults(func=cmd_eval)

    p_stats = sub.add_parser("stats", help="triangle census against a ground truth")
    add_graph_args(p_stats, features_required=True)
    p_stats.add_argument("--ground-truth", required=True)
    p_stats.add_argument(
        "--min-feature-edges", type=int, choices=[0, 1, 2, 3], default=0
    )
    p_stats.add_argument("--out")
    p_stats.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "feature_kind", None) and not getattr(args, "features", None):
        parser.error("--feature-kind requires --features")
    if getattr(args, "features", None) and not getattr(args, "feature_kind", None):
        parser.error("--features requires --feature-kind")
    try:
        return args.func(args)
    except (GraphParseError, GraphValidationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
