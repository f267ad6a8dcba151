"""Seeded synthetic video repositories with long-tail popularity.

Popularity has two layers: a Zipf law across videos by rank (rank r gets
``max_views * r**-zipf_exponent``, with rank = video_id + 1) and a power-law
decay along the GOPs of one video (``base * (index + 1)**-gamma``).

Random draws use numpy's PCG64 seeded through ``SeedSequence((seed,
video_id))``, so each video's stream is independent of every other video.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from functools import cached_property
from pathlib import Path
from typing import Union

import numpy as np

from .model import GopTable, InvalidArgumentError, Video

RNG_ALGORITHM = "numpy.PCG64/SeedSequence(seed, video_id)"
MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class SynthesisConfig:
    video_count: int = 5000
    gop_count_min: int = 50
    gop_count_max: int = 600
    gop_size_mb_min: float = 1.0
    gop_size_mb_max: float = 10.0
    # transcode coefficients and gamma are calibrated; see README "Calibration"
    transcode_alpha_s_per_mb: float = 0.036
    transcode_beta_s: float = 0.012
    zipf_exponent: float = 0.8
    within_video_decay_gamma: float = 1.0
    max_video_views_per_month: float = 1.0e6
    # reference only: lower end of the FAV view range the defaults aim for
    fav_view_floor: float = 1.0e3

    def __post_init__(self):
        if self.video_count < 1:
            raise InvalidArgumentError("video_count must be >= 1")
        if not 1 <= self.gop_count_min <= self.gop_count_max:
            raise InvalidArgumentError("need 1 <= gop_count_min <= gop_count_max")
        if not 0 < self.gop_size_mb_min <= self.gop_size_mb_max:
            raise InvalidArgumentError("need 0 < gop_size_mb_min <= gop_size_mb_max")
        if self.transcode_alpha_s_per_mb < 0 or self.transcode_beta_s < 0:
            raise InvalidArgumentError("transcode coefficients must be non-negative")
        if self.transcode_alpha_s_per_mb == 0 and self.transcode_beta_s == 0:
            raise InvalidArgumentError("transcode coefficients cannot both be zero")
        if not self.zipf_exponent > 0:
            raise InvalidArgumentError("zipf_exponent must be positive")
        if self.within_video_decay_gamma < 0:
            raise InvalidArgumentError("within_video_decay_gamma must be >= 0")
        if not self.max_video_views_per_month > 0:
            raise InvalidArgumentError("max_video_views_per_month must be positive")
        if self.fav_view_floor < 0:
            raise InvalidArgumentError("fav_view_floor must be >= 0")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthesisConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise InvalidArgumentError(f"unknown synthesis config keys: {sorted(unknown)}")
        return cls(**doc)


def load_config(path: Union[str, Path]) -> SynthesisConfig:
    with open(path, encoding="utf-8") as fh:
        return SynthesisConfig.from_dict(json.load(fh))


def transcode_time(size_mb: float, alpha: float, beta: float) -> float:
    """Seconds to transcode one GOP: ``alpha * size_mb + beta``."""
    if not size_mb > 0:
        raise InvalidArgumentError("size_mb must be positive")
    if alpha < 0 or beta < 0:
        raise InvalidArgumentError("alpha and beta must be non-negative")
    if alpha == 0 and beta == 0:
        raise InvalidArgumentError("alpha and beta cannot both be zero")
    return alpha * size_mb + beta


@dataclass(frozen=True, eq=False)
class Repository:
    table: GopTable
    config_echo: SynthesisConfig
    seed: int

    @cached_property
    def video_offsets(self) -> np.ndarray:
        """Row offsets of each video's first GOP, plus a final end offset."""
        starts = np.flatnonzero(self.table.index_in_video == 0)
        return np.append(starts, len(self.table))

    @property
    def video_count(self) -> int:
        return len(self.video_offsets) - 1

    @property
    def gop_count(self) -> int:
        return len(self.table)

    @property
    def videos(self) -> list[Video]:
        """Materialized ``Video`` objects; slow for full-size repositories."""
        offsets = self.video_offsets
        gops = list(self.table)
        return [
            Video(gops[offsets[i]].video_id, tuple(gops[offsets[i]:offsets[i + 1]]))
            for i in range(self.video_count)
        ]

    def base_popularity(self) -> np.ndarray:
        return self.table.views_per_month[self.video_offsets[:-1]]

    def with_views(self, views: np.ndarray) -> "Repository":
        return Repository(self.table.with_views(views), self.config_echo, self.seed)

    def to_dict(self) -> dict:
        t = self.table
        offsets = self.video_offsets.tolist()
        gop_id = t.gop_id.tolist()
        index = t.index_in_video.tolist()
        size = t.size_mb.tolist()
        ttime = t.transcode_time_s.tolist()
        views = t.views_per_month.tolist()
        video_id = t.video_id.tolist()
        videos = []
        for a, b in zip(offsets, offsets[1:]):
            videos.append({
                "video_id": video_id[a],
                "gops": [
                    {
                        "gop_id": gop_id[j],
                        "index": index[j],
                        "size_mb": size[j],
                        "transcode_time_s": ttime[j],
                        "views_per_month": views[j],
                    }
                    for j in range(a, b)
                ],
            })
        return {"seed": self.seed, "config": self.config_echo.to_dict(), "videos": videos}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "Repository":
        cols: dict[str, list] = {k: [] for k in ("gop_id", "video_id", "index", "size", "time", "views")}
        try:
            for video in doc["videos"]:
                vid = int(video["video_id"])
                for g in video["gops"]:
                    cols["gop_id"].append(int(g["gop_id"]))
                    cols["video_id"].append(vid)
                    cols["index"].append(int(g["index"]))
                    cols["size"].append(float(g["size_mb"]))
                    cols["time"].append(float(g["transcode_time_s"]))
                    cols["views"].append(float(g["views_per_month"]))
            config = SynthesisConfig.from_dict(doc["config"])
            seed = int(doc["seed"])
        except (KeyError, TypeError) as exc:
            raise InvalidArgumentError(f"malformed repository document: {exc!r}") from exc
        table = GopTable(
            np.array(cols["gop_id"], dtype=np.int64),
            np.array(cols["video_id"], dtype=np.int64),
            np.array(cols["index"], dtype=np.int64),
            np.array(cols["size"], dtype=float),
            np.array(cols["time"], dtype=float),
            np.array(cols["views"], dtype=float),
        )
        validate_table(table)
        return cls(table, config, seed)


def validate_table(table: GopTable) -> None:
    """Check GOP and per-video invariants on a columnar table."""
    if len(table) == 0:
        raise InvalidArgumentError("repository has no GOPs")
    if np.any(table.size_mb <= 0) or np.any(table.transcode_time_s <= 0):
        raise InvalidArgumentError("GOP sizes and transcode times must be positive")
    if np.any(table.views_per_month < 0) or np.any(~np.isfinite(table.views_per_month)):
        raise InvalidArgumentError("GOP views must be finite and non-negative")
    if len(np.unique(table.gop_id)) != len(table):
        raise InvalidArgumentError("gop_id values must be unique")
    idx = table.index_in_video
    if idx[0] != 0:
        raise InvalidArgumentError("first GOP must have index 0")
    same_video = table.video_id[1:] == table.video_id[:-1]
    if np.any(same_video & (idx[1:] != idx[:-1] + 1)) or np.any(~same_video & (idx[1:] != 0)):
        raise InvalidArgumentError("GOP indices must run 0..n-1 within each video")
    starts = table.video_id[idx == 0]
    if len(np.unique(starts)) != len(starts):
        raise InvalidArgumentError("video_id values must be unique")
    if np.any(same_video & (table.views_per_month[1:] > table.views_per_month[:-1])):
        raise InvalidArgumentError("views must be non-increasing within a video")


def repository_from_videos(videos, seed: int = 0) -> Repository:
    """Build a repository from hand-made ``Video`` objects (tests, examples)."""
    gops = [g for v in videos for g in v.gops]
    table = GopTable.from_gops(gops)
    validate_table(table)
    return Repository(table, SynthesisConfig(video_count=len(videos)), seed)


def load_repository(path: Union[str, Path]) -> Repository:
    with open(path, encoding="utf-8") as fh:
        return Repository.from_dict(json.load(fh))


def synthesize_repository(config: SynthesisConfig, seed: int) -> Repository:
    if config.video_count < 1:
        raise InvalidArgumentError("video_count must be >= 1")
    if not 0 <= seed <= MAX_SEED:
        raise InvalidArgumentError("seed must be a 64-bit unsigned integer")
    n_videos = config.video_count
    counts = np.empty(n_videos, dtype=np.int64)
    sizes = []
    for video_id in range(n_videos):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, video_id))))
        n = int(rng.integers(config.gop_count_min, config.gop_count_max, endpoint=True))
        counts[video_id] = n
        sizes.append(rng.uniform(config.gop_size_mb_min, config.gop_size_mb_max, size=n))

    total = int(counts.sum())
    size_mb = np.concatenate(sizes)
    video_id = np.repeat(np.arange(n_videos, dtype=np.int64), counts)
    starts = np.cumsum(counts) - counts
    index = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)

    ranks = np.arange(1, n_videos + 1, dtype=float)
    base = config.max_video_views_per_month * ranks ** -config.zipf_exponent
    views = np.repeat(base, counts) * (index + 1.0) ** -config.within_video_decay_gamma
    ttime = config.transcode_alpha_s_per_mb * size_mb + config.transcode_beta_s

    table = GopTable(np.arange(total, dtype=np.int64), video_id, index, size_mb, ttime, views)
    return Repository(table, config, seed)


def tail_profile(repo: Repository) -> list[tuple[int, float]]:
    """All GOP views sorted descending, paired with 1-based ranks."""
    if repo.gop_count == 0:
        raise InvalidArgumentError("repository is empty")
    views = np.sort(repo.table.views_per_month)[::-1]
    return list(zip(range(1, len(views) + 1), views.tolist()))
