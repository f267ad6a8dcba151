"""FAV-percentage sweep over the four policies, savings, and CSV output."""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import InvalidArgumentError, PricingConfig
from .policies import (
    FavSelection,
    evaluate_clustered,
    evaluate_full_pre,
    evaluate_full_re,
    evaluate_partial,
)
from .synthesis import SynthesisConfig, synthesize_repository

DEFAULT_PERCENTS = (5.0, 10.0, 15.0, 20.0, 25.0, 30.0)
SWEEP_HEADER = "fav_percent,policy,total_usd_month,storage_usd_month,compute_usd_month,seed"


class UndefinedSavingsError(ValueError):
    pass


@dataclass(frozen=True)
class SweepRow:
    fav_percent: float
    policy_name: str
    total_usd_month: float
    storage_usd_month: float
    compute_usd_month: float
    seed: int


@dataclass(frozen=True)
class SavingsSummary:
    baseline: str
    proposed: str
    fav_percent: float
    savings_percent: float


def savings(baseline_total: float, proposed_total: float) -> float:
    """Relative cost reduction of ``proposed`` against ``baseline``, in percent."""
    if not baseline_total > 0:
        raise UndefinedSavingsError(f"savings undefined for baseline total {baseline_total}")
    if proposed_total < 0:
        raise InvalidArgumentError("proposed total must be non-negative")
    return 100.0 * (1.0 - proposed_total / baseline_total)


def _check_percents(percents: Sequence[float]) -> list[float]:
    percents = [float(p) for p in percents]
    if not percents:
        raise InvalidArgumentError("need at least one FAV percent")
    for p in percents:
        if not 0 < p <= 100:
            raise InvalidArgumentError(f"FAV percent {p} outside (0, 100]")
    return percents


def _rows_for(repo, pricing, percent, k, log_space, seed) -> list[SweepRow]:
    fav = FavSelection.top_percent(percent)
    reports = (
        evaluate_full_pre(repo, pricing),
        evaluate_full_re(repo, pricing),
        evaluate_partial(repo, pricing, fav),
        evaluate_clustered(repo, pricing, fav, k, log_space),
    )
    return [
        SweepRow(percent, r.policy_name, r.total_usd_month, r.storage_usd_month, r.compute_usd_month, seed)
        for r in reports
    ]


def run_sweep(
    config: SynthesisConfig,
    seed: int,
    percents: Sequence[float] = DEFAULT_PERCENTS,
    pricing: PricingConfig = PricingConfig(),
    k: int = 4,
    log_space: bool = True,
    independent_repos: bool = False,
) -> list[SweepRow]:
    """Evaluate all four policies at every FAV percent.

    By default one repository is shared across percents so only the FAV cut
    changes. ``independent_repos`` synthesizes a fresh repository per
    percent with seed ``seed + i`` for the i-th percent; rows carry that
    derived seed.
    """
    percents = _check_percents(percents)
    rows = []
    shared = None if independent_repos else synthesize_repository(config, seed)
    for i, percent in enumerate(percents):
        run_seed = seed + i if independent_repos else seed
        repo = shared if shared is not None else synthesize_repository(config, run_seed)
        rows.extend(_rows_for(repo, pricing, percent, k, log_space, run_seed))
    return rows


def run_repeats(
    config: SynthesisConfig,
    seed: int,
    repeats: int,
    percents: Sequence[float] = DEFAULT_PERCENTS,
    pricing: PricingConfig = PricingConfig(),
    k: int = 4,
    log_space: bool = True,
    independent_repos: bool = False,
) -> list[SweepRow]:
    """``run_sweep`` for seeds ``seed, seed + 1000, ...``; rows from every repeat."""
    if repeats < 1:
        raise InvalidArgumentError("repeats must be >= 1")
    rows = []
    for r in range(repeats):
        rows.extend(run_sweep(config, seed + 1000 * r, percents, pricing, k, log_space, independent_repos))
    return rows


def savings_table(rows: Iterable[SweepRow], proposed: str = "clustered") -> list[SavingsSummary]:
    """Savings of ``proposed`` against each other policy, per (percent, seed)."""
    cells: dict[tuple[float, int], dict[str, float]] = {}
    for row in rows:
        cells.setdefault((row.fav_percent, row.seed), {})[row.policy_name] = row.total_usd_month
    out = []
    for (percent, _seed), totals in sorted(cells.items()):
        for baseline in sorted(totals):
            if baseline == proposed or totals[baseline] <= 0:
                continue
            out.append(SavingsSummary(baseline, proposed, percent, savings(totals[baseline], totals[proposed])))
    return out


def _sort_key(row: SweepRow):
    return (row.fav_percent, row.policy_name, row.seed)


def emit_sweep_csv(rows: Sequence[SweepRow]) -> str:
    if not rows:
        raise InvalidArgumentError("no sweep rows to emit")
    buf = io.StringIO(newline="")
    buf.write(SWEEP_HEADER + "\n")
    for r in sorted(rows, key=_sort_key):
        buf.write(
            f"{r.fav_percent:.6f},{r.policy_name},{r.total_usd_month:.6f},"
            f"{r.storage_usd_month:.6f},{r.compute_usd_month:.6f},{r.seed}\n"
        )
    return buf.getvalue()


def emit_repeat_summary_csv(rows: Sequence[SweepRow]) -> str:
    """Mean, min and max of total cost per (percent, policy) over seeds."""
    if not rows:
        raise InvalidArgumentError("no sweep rows to summarize")
    cells: dict[tuple[float, str], list[float]] = {}
    for r in rows:
        cells.setdefault((r.fav_percent, r.policy_name), []).append(r.total_usd_month)
    lines = ["fav_percent,policy,runs,mean_total_usd_month,min_total_usd_month,max_total_usd_month"]
    for (percent, policy), totals in sorted(cells.items()):
        arr = np.array(totals)
        lines.append(
            f"{percent:.6f},{policy},{len(arr)},{arr.mean():.6f},{arr.min():.6f},{arr.max():.6f}"
        )
    return "\n".join(lines) + "\n"
