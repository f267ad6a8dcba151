"""Domain types and the two cost primitives every policy is built from.

Storage is billed per GB-month, re-transcoding per VM-hour of transcode
work. Sizes are carried in MB and converted with a binary 1024 divisor.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

MB_PER_GB = 1024
SECONDS_PER_HOUR = 3600.0
DEFAULT_VM_PRICE_USD_PER_HOUR = 0.05


class InvalidArgumentError(ValueError):
    pass


class CapacityError(ValueError):
    """More clusters than storage tiers to put them on."""


@dataclass(frozen=True)
class StorageTier:
    name: str
    price_usd_per_gb_month: float
    access_rank: int

    def __post_init__(self):
        if not self.price_usd_per_gb_month > 0:
            raise InvalidArgumentError(f"tier {self.name!r}: price must be positive")
        if self.access_rank < 1:
            raise InvalidArgumentError(f"tier {self.name!r}: access_rank must be >= 1")


DEFAULT_TIERS = (
    StorageTier("S3-Standard", 0.023, 1),
    StorageTier("S3-Standard-IA", 0.0125, 2),
    StorageTier("S3-One-Zone-IA", 0.01, 3),
    StorageTier("S3-Glacier", 0.001, 4),
)


@dataclass(frozen=True)
class PricingConfig:
    """Storage tiers sorted by strictly descending price, plus the VM rate."""

    tiers: tuple[StorageTier, ...] = DEFAULT_TIERS
    vm_price_usd_per_hour: float = DEFAULT_VM_PRICE_USD_PER_HOUR

    def __post_init__(self):
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if not self.tiers:
            raise InvalidArgumentError("pricing needs at least one tier")
        prices = [t.price_usd_per_gb_month for t in self.tiers]
        if any(a <= b for a, b in zip(prices, prices[1:])):
            raise InvalidArgumentError("tiers must be strictly price-sorted descending")
        if len({t.name for t in self.tiers}) != len(self.tiers):
            raise InvalidArgumentError("tier names must be unique")
        if len({t.access_rank for t in self.tiers}) != len(self.tiers):
            raise InvalidArgumentError("tier access ranks must be unique")
        if not self.vm_price_usd_per_hour > 0:
            raise InvalidArgumentError("vm_price_usd_per_hour must be positive")

    @property
    def top_tier(self) -> StorageTier:
        return self.tiers[0]

    def to_dict(self) -> dict:
        return {
            "tiers": [
                {
                    "name": t.name,
                    "price_usd_per_gb_month": t.price_usd_per_gb_month,
                    "access_rank": t.access_rank,
                }
                for t in self.tiers
            ],
            "vm_price_usd_per_hour": self.vm_price_usd_per_hour,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PricingConfig":
        try:
            tiers = tuple(
                StorageTier(
                    str(t["name"]),
                    float(t["price_usd_per_gb_month"]),
                    int(t["access_rank"]),
                )
                for t in doc["tiers"]
            )
            vm = float(doc.get("vm_price_usd_per_hour", DEFAULT_VM_PRICE_USD_PER_HOUR))
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed pricing document: {exc!r}") from exc
        return cls(tiers, vm)


def load_pricing(path: Union[str, Path]) -> PricingConfig:
    with open(path, encoding="utf-8") as fh:
        return PricingConfig.from_dict(json.load(fh))


@dataclass(frozen=True)
class Gop:
    gop_id: int
    video_id: int
    index_in_video: int
    size_mb: float
    transcode_time_s: float
    views_per_month: float

    def __post_init__(self):
        if self.index_in_video < 0:
            raise InvalidArgumentError("index_in_video must be >= 0")
        if not self.size_mb > 0:
            raise InvalidArgumentError("size_mb must be positive")
        if not self.transcode_time_s > 0:
            raise InvalidArgumentError("transcode_time_s must be positive")
        if not self.views_per_month >= 0:
            raise InvalidArgumentError("views_per_month must be non-negative")


@dataclass(frozen=True)
class Video:
    video_id: int
    gops: tuple[Gop, ...]

    def __post_init__(self):
        object.__setattr__(self, "gops", tuple(self.gops))
        if not self.gops:
            raise InvalidArgumentError(f"video {self.video_id} has no GOPs")
        if [g.index_in_video for g in self.gops] != list(range(len(self.gops))):
            raise InvalidArgumentError(f"video {self.video_id}: GOP indices must be 0..n-1")
        views = [g.views_per_month for g in self.gops]
        if any(a < b for a, b in zip(views, views[1:])):
            raise InvalidArgumentError(f"video {self.video_id}: views must be non-increasing")

    @property
    def base_popularity(self) -> float:
        return self.gops[0].views_per_month


@dataclass(frozen=True, eq=False)
class GopTable:
    """Column-oriented GOP collection.

    Repositories hold millions of GOPs, so the policies work on these
    arrays rather than on per-GOP objects. Iterating yields ``Gop`` values.
    """

    gop_id: np.ndarray
    video_id: np.ndarray
    index_in_video: np.ndarray
    size_mb: np.ndarray
    transcode_time_s: np.ndarray
    views_per_month: np.ndarray

    def __post_init__(self):
        n = len(self.gop_id)
        for name in ("video_id", "index_in_video", "size_mb", "transcode_time_s", "views_per_month"):
            if len(getattr(self, name)) != n:
                raise InvalidArgumentError(f"column {name} has the wrong length")

    def __len__(self) -> int:
        return len(self.gop_id)

    def __iter__(self) -> Iterator[Gop]:
        for row in zip(
            self.gop_id.tolist(),
            self.video_id.tolist(),
            self.index_in_video.tolist(),
            self.size_mb.tolist(),
            self.transcode_time_s.tolist(),
            self.views_per_month.tolist(),
        ):
            yield Gop(*row)

    def take(self, selector) -> "GopTable":
        """Rows picked by a boolean mask or an index array."""
        return GopTable(
            self.gop_id[selector],
            self.video_id[selector],
            self.index_in_video[selector],
            self.size_mb[selector],
            self.transcode_time_s[selector],
            self.views_per_month[selector],
        )

    def with_views(self, views: np.ndarray) -> "GopTable":
        return GopTable(
            self.gop_id,
            self.video_id,
            self.index_in_video,
            self.size_mb,
            self.transcode_time_s,
            np.asarray(views, dtype=float),
        )

    @classmethod
    def from_gops(cls, gops: Iterable[Gop]) -> "GopTable":
        gops = list(gops)
        return cls(
            np.array([g.gop_id for g in gops], dtype=np.int64),
            np.array([g.video_id for g in gops], dtype=np.int64),
            np.array([g.index_in_video for g in gops], dtype=np.int64),
            np.array([g.size_mb for g in gops], dtype=float),
            np.array([g.transcode_time_s for g in gops], dtype=float),
            np.array([g.views_per_month for g in gops], dtype=float),
        )


GopCollection = Union[GopTable, Iterable[Gop]]


def as_table(gops: GopCollection) -> GopTable:
    if isinstance(gops, GopTable):
        return gops
    return GopTable.from_gops(gops)


def storage_cost_monthly(gops: GopCollection, price: float) -> float:
    """USD/month to keep ``gops`` stored at ``price`` USD per GB-month."""
    if not price > 0:
        raise InvalidArgumentError(f"storage price must be positive, got {price}")
    table = as_table(gops)
    return float(np.sum(table.size_mb)) * price / MB_PER_GB


def retranscode_cost_monthly(gops: GopCollection, vm_price_usd_per_hour: float) -> float:
    """USD/month of VM time when every view triggers a fresh transcode."""
    if not vm_price_usd_per_hour > 0:
        raise InvalidArgumentError(f"vm price must be positive, got {vm_price_usd_per_hour}")
    table = as_table(gops)
    work_s = float(np.sum(table.views_per_month * table.transcode_time_s))
    return work_s / SECONDS_PER_HOUR * vm_price_usd_per_hour


@dataclass(frozen=True)
class CostReport:
    policy_name: str
    per_tier_storage_usd_month: tuple[tuple[str, float], ...]
    compute_usd_month: float
    pretranscoded_gop_count: int
    retranscoded_gop_count: int
    total_usd_month: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "per_tier_storage_usd_month", tuple(
            (str(name), float(usd)) for name, usd in self.per_tier_storage_usd_month
        ))
        if self.total_usd_month is None:
            object.__setattr__(self, "total_usd_month", self.storage_usd_month + self.compute_usd_month)

    @property
    def storage_usd_month(self) -> float:
        return float(sum(usd for _, usd in self.per_tier_storage_usd_month))

    def storage_for(self, tier_name: str) -> float:
        return dict(self.per_tier_storage_usd_month)[tier_name]

    def to_dict(self) -> dict:
        return {
            "policy": self.policy_name,
            "per_tier_storage_usd_month": [
                {"tier": name, "usd": usd} for name, usd in self.per_tier_storage_usd_month
            ],
            "compute_usd_month": self.compute_usd_month,
            "total_usd_month": self.total_usd_month,
            "pretranscoded_gops": self.pretranscoded_gop_count,
            "retranscoded_gops": self.retranscoded_gop_count,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CostReport":
        return cls(
            policy_name=doc["policy"],
            per_tier_storage_usd_month=tuple(
                (e["tier"], e["usd"]) for e in doc["per_tier_storage_usd_month"]
            ),
            compute_usd_month=doc["compute_usd_month"],
            pretranscoded_gop_count=doc["pretranscoded_gops"],
            retranscoded_gop_count=doc["retranscoded_gops"],
            total_usd_month=doc["total_usd_month"],
        )


def tier_names(pricing: PricingConfig) -> Sequence[str]:
    return [t.name for t in pricing.tiers]
