#!/usr/bin/env python3
"""Grid search used once to freeze the synthesis defaults.

For each (gamma, transcode scale) the repository is synthesized with
alpha = 3 * scale s/MB and beta = scale s, and the 30% FAV savings of the
clustered policy are checked against the target bands:
vs full_re [80, 95], vs full_pre [65, 85], vs partial [30, 50].
"""
import argparse
from dataclasses import replace

from vodtier.experiment import savings
from vodtier.model import PricingConfig
from vodtier.policies import (
    FavSelection,
    evaluate_clustered,
    evaluate_full_pre,
    evaluate_full_re,
    evaluate_partial,
)
from vodtier.synthesis import SynthesisConfig, synthesize_repository

BANDS = {"full_re": (80, 95), "full_pre": (65, 85), "partial": (30, 50)}

parser = argparse.ArgumentParser()
parser.add_argument("--seeds", type=int, nargs="+", default=[42, 1, 7])
parser.add_argument("--gammas", type=float, nargs="+", default=[0.5, 0.75, 1.0])
parser.add_argument("--scales", type=float, nargs="+", default=[0.004, 0.008, 0.012, 0.016, 0.02])
parser.add_argument("--percent", type=float, default=30.0)
args = parser.parse_args()

pricing = PricingConfig()
fav = FavSelection.top_percent(args.percent)
for gamma in args.gammas:
    for scale in args.scales:
        cfg = replace(
            SynthesisConfig(),
            within_video_decay_gamma=gamma,
            transcode_alpha_s_per_mb=3 * scale,
            transcode_beta_s=scale,
        )
        for seed in args.seeds:
            repo = synthesize_repository(cfg, seed)
            clustered = evaluate_clustered(repo, pricing, fav).total_usd_month
            totals = {
                "full_re": evaluate_full_re(repo, pricing).total_usd_month,
                "full_pre": evaluate_full_pre(repo, pricing).total_usd_month,
                "partial": evaluate_partial(repo, pricing, fav).total_usd_month,
            }
            got = {name: savings(total, clustered) for name, total in totals.items()}
            ok = all(lo <= got[name] <= hi for name, (lo, hi) in BANDS.items())
            cols = "  ".join(f"{name} {v:6.1f}" for name, v in got.items())
            print(f"gamma={gamma:<5} scale={scale:<6} seed={seed:<3} {cols}  {'in bands' if ok else ''}")
