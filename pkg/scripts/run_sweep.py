#!/usr/bin/env python3
"""Run the FAV-percentage sweep and print a savings table.

    python scripts/run_sweep.py --seed 42 --repeats 3 --out results/sweep.csv
"""
import argparse
from pathlib import Path

import numpy as np

from vodtier.experiment import DEFAULT_PERCENTS, emit_sweep_csv, run_repeats, savings_table
from vodtier.synthesis import SynthesisConfig, load_config

parser = argparse.ArgumentParser()
parser.add_argument("--config", help="synthesis config JSON")
parser.add_argument("--seed", type=int, default=42)
parser.add_argument("--repeats", type=int, default=1)
parser.add_argument("--k", type=int, default=4)
parser.add_argument("--raw-space", action="store_true", help="cluster raw views instead of log10(views+1)")
parser.add_argument("--out", default="results/sweep.csv")
args = parser.parse_args()

config = load_config(args.config) if args.config else SynthesisConfig()
rows = run_repeats(config, args.seed, args.repeats, DEFAULT_PERCENTS, k=args.k, log_space=not args.raw_space)
Path(args.out).parent.mkdir(parents=True, exist_ok=True)
Path(args.out).write_text(emit_sweep_csv(rows))

cells = {}
for s in savings_table(rows):
    cells.setdefault((s.fav_percent, s.baseline), []).append(s.savings_percent)

print(f"{'FAV %':>6} | {'vs full_re':>16} | {'vs full_pre':>16} | {'vs partial':>16}")
for percent in DEFAULT_PERCENTS:
    parts = []
    for baseline in ("full_re", "full_pre", "partial"):
        v = np.array(cells[(percent, baseline)])
        parts.append(f"{v.mean():6.1f} [{v.min():5.1f},{v.max():5.1f}]")
    print(f"{percent:6.0f} | " + " | ".join(parts))
print(f"wrote {len(rows)} rows to {args.out}")
