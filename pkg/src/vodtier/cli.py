"""Command-line entry point: ``vodtier {synth,cluster,evaluate,sweep}``."""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence

from .experiment import (
    DEFAULT_PERCENTS,
    emit_repeat_summary_csv,
    emit_sweep_csv,
    run_repeats,
)
from .model import PricingConfig, load_pricing
from .policies import POLICY_KINDS, FavSelection, PolicySpec, evaluate, place_clustered
from .synthesis import MAX_SEED, SynthesisConfig, load_config, load_repository, synthesize_repository


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def _percents(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad percent list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vodtier", description="Tiered storage vs re-transcoding cost simulator.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="synthesize a repository")
    p.add_argument("--config", help="synthesis config JSON (defaults if omitted)")
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--out", required=True, help="output .repo.json path")

    p = sub.add_parser("cluster", help="cluster FAV GOPs and assign tiers")
    p.add_argument("--repo", required=True)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--log-space", type=_bool, default=True)
    p.add_argument("--pricing", help="pricing JSON (default S3 prices if omitted)")
    p.add_argument("--fav-percent", type=float, help="top-percent FAV cut; break-even if omitted")
    p.add_argument("--out", required=True, help="per-GOP CSV path")
    p.add_argument("--summary-out", help="per-cluster CSV path (default: <out>.summary.csv)")

    p = sub.add_parser("evaluate", help="cost one policy over a repository")
    p.add_argument("--repo", required=True)
    p.add_argument("--policy", choices=POLICY_KINDS, required=True)
    p.add_argument("--pricing")
    p.add_argument("--fav-percent", type=float, help="top-percent FAV cut; break-even if omitted")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--log-space", type=_bool, default=True)
    p.add_argument("--out", help="CostReport JSON path (stdout if omitted)")

    p = sub.add_parser("sweep", help="sweep FAV percent over all policies")
    p.add_argument("--config")
    p.add_argument("--pricing")
    p.add_argument("--seed", type=_seed, default=42)
    p.add_argument("--percents", type=_percents, default=list(DEFAULT_PERCENTS))
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--log-space", type=_bool, default=True)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--independent-repos", action="store_true")
    p.add_argument("--out", required=True, help="output CSV path")
    return parser


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _pricing(path: Optional[str]) -> PricingConfig:
    return load_pricing(path) if path else PricingConfig()


def _fav(percent: Optional[float]) -> FavSelection:
    return FavSelection.break_even() if percent is None else FavSelection.top_percent(percent)


def cmd_synth(args) -> str:
    config = load_config(args.config) if args.config else SynthesisConfig()
    repo = synthesize_repository(config, args.seed)
    write_atomic(args.out, repo.dumps())
    return f"synth: {repo.video_count} videos, {repo.gop_count} GOPs -> {args.out}"


def cmd_cluster(args) -> str:
    repo = load_repository(args.repo)
    pricing = _pricing(args.pricing)
    placed = place_clustered(repo, pricing, _fav(args.fav_percent), args.k, args.log_space)
    t = repo.table
    lines = ["gop_id,video_id,views_per_month,cluster,tier"]
    for row, label in zip(placed.stored_rows.tolist(), placed.labels.tolist()):
        lines.append(
            f"{t.gop_id[row]},{t.video_id[row]},{t.views_per_month[row]:.6f},"
            f"{label},{placed.cluster_to_tier[label]}"
        )
    sizes = [int((placed.labels == c).sum()) for c in range(len(placed.centroids))]
    summary = ["cluster,centroid,size,tier"]
    for c, (centroid, size) in enumerate(zip(placed.centroids, sizes)):
        summary.append(f"{c},{centroid:.6f},{size},{placed.cluster_to_tier[c]}")
    summary_path = args.summary_out or f"{args.out}.summary.csv"
    write_atomic(args.out, "\n".join(lines) + "\n")
    write_atomic(summary_path, "\n".join(summary) + "\n")
    return (
        f"cluster: {len(placed.stored_rows)} FAV GOPs in {len(sizes)} clusters, "
        f"storage {placed.report.storage_usd_month:.6f} USD/month -> {args.out}"
    )


def cmd_evaluate(args) -> str:
    repo = load_repository(args.repo)
    spec = PolicySpec(args.policy, _fav(args.fav_percent), args.k, args.log_space)
    report = evaluate(repo, _pricing(args.pricing), spec)
    doc = json.dumps(report.to_dict(), indent=2) + "\n"
    if args.out:
        write_atomic(args.out, doc)
    else:
        sys.stdout.write(doc)
    return f"{report.policy_name}: total {report.total_usd_month:.6f} USD/month"


def cmd_sweep(args) -> str:
    config = load_config(args.config) if args.config else SynthesisConfig()
    rows = run_repeats(
        config,
        args.seed,
        args.repeats,
        args.percents,
        _pricing(args.pricing),
        args.k,
        args.log_space,
        args.independent_repos,
    )
    write_atomic(args.out, emit_sweep_csv(rows))
    if args.repeats > 1:
        write_atomic(f"{args.out}.summary.csv", emit_repeat_summary_csv(rows))
    return f"sweep: {len(rows)} rows -> {args.out}"


COMMANDS = {"synth": cmd_synth, "cluster": cmd_cluster, "evaluate": cmd_evaluate, "sweep": cmd_sweep}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    try:
        summary = COMMANDS[args.command](args)
    except (OSError, ValueError, KeyError) as exc:
        message = " ".join(str(exc).split()) or type(exc).__name__
        print(f"vodtier {args.command}: error: {message}", file=sys.stderr)
        return 1
    print(summary)
    return 0


def main() -> None:
    sys.exit(run())
