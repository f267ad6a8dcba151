"""Exit criteria for the desk-scale reproduction.

Each test tags itself with a criterion label; ``conftest.py`` prints one
PASS/FAIL line per criterion at the end of the run. Tolerances are fixed
here and not tuned per run.
"""
import hashlib
import json
import random
import time

import numpy as np
import pytest

from oracles import brute_force_kmeans
from vodtier.cli import run
from vodtier.clustering import cluster_views, clustering_values
from vodtier.experiment import emit_sweep_csv, run_sweep, savings
from vodtier.model import GopTable, PricingConfig, storage_cost_monthly
from vodtier.policies import (
    FavSelection,
    evaluate_clustered,
    evaluate_full_pre,
    evaluate_full_re,
    evaluate_partial,
    place_clustered,
)
from vodtier.synthesis import SynthesisConfig, synthesize_repository

PRICING = PricingConfig()
DESK = SynthesisConfig()
SWEEP_PERCENTS = [5, 10, 15, 20, 25, 30]
SLACK = 1e-9
EVAL_SECONDS = 10.0


def table_of(views):
    n = len(views)
    ids = np.arange(n, dtype=np.int64)
    return GopTable(ids, ids, np.zeros(n, dtype=np.int64), np.ones(n), np.ones(n), np.asarray(views, float))


@pytest.fixture(scope="module")
def desk_sweep():
    return run_sweep(DESK, 42, SWEEP_PERCENTS, PRICING, 4, True)


def timed(fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - start


def test_c1_dominance_suite(record_property):
    record_property("criterion", "C1 dominance: clustered <= partial <= min(full_pre, full_re), 20 seeds, <10 s/eval")
    fav = FavSelection.break_even()
    slowest = 0.0
    for seed in range(20):
        repo = synthesize_repository(DESK, seed)
        pre, t1 = timed(evaluate_full_pre, repo, PRICING)
        re, t2 = timed(evaluate_full_re, repo, PRICING)
        part, t3 = timed(evaluate_partial, repo, PRICING, fav)
        clus, t4 = timed(evaluate_clustered, repo, PRICING, fav, 4, True)
        slowest = max(slowest, t1, t2, t3, t4)
        floor = min(pre.total_usd_month, re.total_usd_month)
        assert clus.total_usd_month <= part.total_usd_month + SLACK, seed
        assert part.total_usd_month <= floor + SLACK, seed
    assert slowest < EVAL_SECONDS


def test_c2_clustering_oracle(record_property):
    record_property("criterion", "C2 clustering: DP wcss == exhaustive minimum (rel 1e-9); wcss non-increasing in k")
    rng = np.random.default_rng(2024)
    for i in range(200):
        n = int(rng.integers(1, 13))
        k = int(rng.integers(1, 5))
        log_space = bool(i % 2)
        views = rng.lognormal(6, 3, n) if i % 3 else rng.integers(0, 50, n).astype(float)
        values = clustering_values(views, log_space).tolist()
        k_eff = min(k, len(set(values)))
        expected, _ = brute_force_kmeans(values, k_eff)
        got = cluster_views(table_of(views), k, log_space).wcss
        assert got == pytest.approx(expected, rel=1e-9, abs=1e-12), (i, views.tolist(), k)
    for i in range(50):
        n = int(rng.integers(2, 257))
        views = rng.lognormal(6, 3, n)
        table = table_of(views)
        for log_space in (False, True):
            w = [cluster_views(table, k, log_space).wcss for k in range(1, 9)]
            assert all(b <= a * (1 + 1e-12) for a, b in zip(w, w[1:])), (i, w)


def test_c3_tier_price_unit_check(record_property):
    record_property("criterion", "C3 default tier prices: 1024 MB per tier -> 0.023, 0.0125, 0.01, 0.001 exactly")
    zero = np.zeros(1, dtype=np.int64)
    one_gb = GopTable(zero, zero, zero, np.array([1024.0]), np.array([1.0]), np.array([0.0]))
    got = [storage_cost_monthly(one_gb, t.price_usd_per_gb_month) for t in PRICING.tiers]
    assert got == [0.023, 0.0125, 0.01, 0.001]


def test_c4_full_pre_constancy(record_property, desk_sweep):
    record_property("criterion", "C4 full_pre bit-identical across the sweep and under view permutation")
    totals = [r.total_usd_month for r in desk_sweep if r.policy_name == "full_pre"]
    assert len(totals) == len(SWEEP_PERCENTS)
    assert len(set(totals)) == 1
    repo = synthesize_repository(DESK, 42)
    base = evaluate_full_pre(repo, PRICING)
    shuffled = np.random.default_rng(1).permutation(repo.table.views_per_month)
    assert evaluate_full_pre(repo.with_views(shuffled), PRICING) == base
    assert base.total_usd_month == totals[0]


def test_c5_calibration_bands(record_property, desk_sweep):
    record_property("criterion", "C5 savings at 30% FAV: vs full_re [80,95], vs full_pre [65,85], vs partial [30,50]")
    at30 = {r.policy_name: r.total_usd_month for r in desk_sweep if r.fav_percent == 30}
    vs_re = savings(at30["full_re"], at30["clustered"])
    vs_pre = savings(at30["full_pre"], at30["clustered"])
    vs_partial = savings(at30["partial"], at30["clustered"])
    print(f"savings at 30%: vs full_re {vs_re:.2f}%, vs full_pre {vs_pre:.2f}%, vs partial {vs_partial:.2f}%")
    assert 80 <= vs_re <= 95
    assert 65 <= vs_pre <= 85
    assert 30 <= vs_partial <= 50


def test_c6_tier_popularity_monotone(record_property):
    record_property("criterion", "C6 mean views on tier rank i >= rank i+1 in every clustered report")
    repo = synthesize_repository(DESK, 42)
    rank = {t.name: t.access_rank for t in PRICING.tiers}
    views = repo.table.views_per_month
    for percent in SWEEP_PERCENTS:
        placed = place_clustered(repo, PRICING, FavSelection.top_percent(percent), 4, True)
        stored = views[placed.stored_rows]
        by_rank = sorted(
            (rank[tier], stored[placed.labels == c].mean()) for c, tier in placed.cluster_to_tier.items()
        )
        means = [m for _, m in by_rank]
        assert all(a >= b for a, b in zip(means, means[1:])), (percent, means)


def test_c7_determinism(record_property, tmp_path, monkeypatch, desk_sweep):
    record_property("criterion", "C7 synth/sweep byte-identical across runs; sweep independent of evaluation order")
    monkeypatch.chdir(tmp_path)
    (tmp_path / "c.json").write_text(json.dumps({"video_count": 300}))

    def sha(name):
        return hashlib.sha256((tmp_path / name).read_bytes()).hexdigest()

    for out in ("a.repo.json", "b.repo.json"):
        assert run(["synth", "--config", "c.json", "--seed", "42", "--out", out]) == 0
    assert sha("a.repo.json") == sha("b.repo.json")

    for out in ("a.csv", "b.csv"):
        assert run(["sweep", "--seed", "42", "--percents", "5,10,15,20,25,30", "--out", out]) == 0
    assert sha("a.csv") == sha("b.csv")

    shuffled = list(SWEEP_PERCENTS)
    random.Random(7).shuffle(shuffled)
    reordered = run_sweep(DESK, 42, shuffled, PRICING, 4, True)
    assert emit_sweep_csv(reordered) == emit_sweep_csv(desk_sweep)
    assert (tmp_path / "a.csv").read_text() == emit_sweep_csv(desk_sweep)
