"""The four storage/transcoding strategies, each producing a CostReport.

* ``full_pre``: every GOP stored on the most expensive tier.
* ``full_re``: nothing stored; every view re-transcodes.
* ``partial``: frequently accessed GOPs (FAVs) stored on the top tier,
  the rest re-transcoded.
* ``clustered``: FAVs clustered by views and spread over the tiers, the
  rest re-transcoded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .clustering import cluster_views, map_clusters_to_tiers
from .model import (
    MB_PER_GB,
    SECONDS_PER_HOUR,
    CapacityError,
    CostReport,
    InvalidArgumentError,
    PricingConfig,
    retranscode_cost_monthly,
    storage_cost_monthly,
)
from .synthesis import Repository

POLICY_KINDS = ("full_pre", "full_re", "partial", "clustered")


@dataclass(frozen=True)
class FavSelection:
    mode: str = "break_even"
    percent: Optional[float] = None

    def __post_init__(self):
        if self.mode == "top_percent":
            if self.percent is None or not 0 < self.percent <= 100:
                raise InvalidArgumentError("top_percent needs a percent in (0, 100]")
        elif self.mode != "break_even":
            raise InvalidArgumentError(f"unknown FAV selection mode {self.mode!r}")

    @classmethod
    def top_percent(cls, percent: float) -> "FavSelection":
        return cls("top_percent", float(percent))

    @classmethod
    def break_even(cls) -> "FavSelection":
        return cls("break_even")


@dataclass(frozen=True)
class PolicySpec:
    kind: str
    fav: FavSelection = field(default_factory=FavSelection)
    k: int = 4
    log_space: bool = True

    def __post_init__(self):
        if self.kind not in POLICY_KINDS:
            raise InvalidArgumentError(f"unknown policy {self.kind!r}; expected one of {POLICY_KINDS}")
        if self.k < 1:
            raise InvalidArgumentError("k must be >= 1")


# Either a selection rule or an explicit collection of FAV gop_ids.
FavArg = Union[FavSelection, Iterable[int]]


def top_percent_count(n: int, percent: float) -> int:
    # rounding guards against 0.1 + 0.2 style noise before the ceiling
    return min(n, math.ceil(round(n * percent / 100.0, 9)))


def fav_mask(repo: Repository, pricing: PricingConfig, fav: FavArg) -> np.ndarray:
    """Boolean mask over ``repo.table`` rows marking the FAV GOPs."""
    t = repo.table
    if isinstance(fav, FavSelection):
        if fav.mode == "top_percent":
            count = top_percent_count(len(t), fav.percent)
            order = np.lexsort((t.gop_id, -t.views_per_month))
            mask = np.zeros(len(t), dtype=bool)
            mask[order[:count]] = True
            return mask
        per_view = t.transcode_time_s / SECONDS_PER_HOUR * pricing.vm_price_usd_per_hour
        store = t.size_mb / MB_PER_GB * pricing.top_tier.price_usd_per_gb_month
        return t.views_per_month * per_view > store
    return np.isin(t.gop_id, np.fromiter(fav, dtype=np.int64))


def select_favs(repo: Repository, pricing: PricingConfig, fav: FavSelection) -> set[int]:
    if repo.gop_count == 0:
        raise InvalidArgumentError("repository is empty")
    mask = fav_mask(repo, pricing, fav)
    return set(repo.table.gop_id[mask].tolist())


def _storage_rows(pricing: PricingConfig, amounts: dict[str, float]) -> tuple:
    return tuple((t.name, amounts.get(t.name, 0.0)) for t in pricing.tiers)


def _report(name, pricing, amounts, stored, rest) -> CostReport:
    compute = retranscode_cost_monthly(rest, pricing.vm_price_usd_per_hour) if len(rest) else 0.0
    return CostReport(
        policy_name=name,
        per_tier_storage_usd_month=_storage_rows(pricing, amounts),
        compute_usd_month=compute,
        pretranscoded_gop_count=int(stored),
        retranscoded_gop_count=len(rest),
    )


def evaluate_full_pre(repo: Repository, pricing: PricingConfig) -> CostReport:
    top = pricing.top_tier
    amounts = {top.name: storage_cost_monthly(repo.table, top.price_usd_per_gb_month)}
    return _report("full_pre", pricing, amounts, repo.gop_count, repo.table.take(slice(0, 0)))


def evaluate_full_re(repo: Repository, pricing: PricingConfig) -> CostReport:
    return _report("full_re", pricing, {}, 0, repo.table)


def evaluate_partial(repo: Repository, pricing: PricingConfig, fav: FavArg) -> CostReport:
    mask = fav_mask(repo, pricing, fav)
    top = pricing.top_tier
    amounts = {}
    if mask.any():
        amounts[top.name] = storage_cost_monthly(repo.table.take(mask), top.price_usd_per_gb_month)
    return _report("partial", pricing, amounts, mask.sum(), repo.table.take(~mask))


@dataclass(frozen=True, eq=False)
class ClusteredPlacement:
    """Where each stored GOP went; kept for the ``cluster`` CLI output."""

    report: CostReport
    stored_rows: np.ndarray
    labels: np.ndarray
    centroids: tuple[float, ...]
    cluster_to_tier: dict[int, str]


def place_clustered(
    repo: Repository,
    pricing: PricingConfig,
    fav: FavArg,
    k: int = 4,
    log_space: bool = True,
) -> ClusteredPlacement:
    if k > len(pricing.tiers):
        raise CapacityError(f"k={k} exceeds the {len(pricing.tiers)} configured tiers")
    mask = fav_mask(repo, pricing, fav)
    rows = np.flatnonzero(mask)
    amounts: dict[str, float] = {}
    labels = np.zeros(0, dtype=np.int64)
    centroids: tuple[float, ...] = ()
    mapping: dict[int, str] = {}
    if len(rows):
        stored = repo.table.take(rows)
        result = cluster_views(stored, k, log_space)
        mapping = map_clusters_to_tiers(result, pricing).cluster_to_tier
        prices = {t.name: t.price_usd_per_gb_month for t in pricing.tiers}
        for c, tier in mapping.items():
            amounts[tier] = storage_cost_monthly(stored.take(result.labels == c), prices[tier])
        labels, centroids = result.labels, result.centroids
    report = _report("clustered", pricing, amounts, len(rows), repo.table.take(~mask))
    return ClusteredPlacement(report, rows, labels, centroids, mapping)


def evaluate_clustered(
    repo: Repository,
    pricing: PricingConfig,
    fav: FavArg,
    k: int = 4,
    log_space: bool = True,
) -> CostReport:
    return place_clustered(repo, pricing, fav, k, log_space).report


def evaluate(repo: Repository, pricing: PricingConfig, spec: PolicySpec) -> CostReport:
    if spec.kind == "full_pre":
        return evaluate_full_pre(repo, pricing)
    if spec.kind == "full_re":
        return evaluate_full_re(repo, pricing)
    if spec.kind == "partial":
        return evaluate_partial(repo, pricing, spec.fav)
    return evaluate_clustered(repo, pricing, spec.fav, spec.k, spec.log_space)
