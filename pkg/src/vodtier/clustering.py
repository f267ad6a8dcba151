"""Exact 1-D k-means over GOP view counts and the cluster-to-tier mapping.

In one dimension the optimal k-means clusters are contiguous runs of the
sorted values, so the global optimum comes from a dynamic program over
split points. Each DP layer is filled with the divide-and-conquer
optimization (the optimal split index is monotone in the prefix length),
evaluated level by level with numpy so a layer costs O(n log n) vector work.

Duplicate values are collapsed into weighted points before the DP, which
keeps every cluster non-empty when ``k`` exceeds the number of distinct
values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CapacityError, GopCollection, InvalidArgumentError, PricingConfig, as_table


@dataclass(frozen=True, eq=False)
class ClusterResult:
    """Partition of GOPs into view-similarity clusters.

    ``labels[i]`` is the cluster of ``gop_ids[i]``; cluster 0 has the largest
    centroid.
    """

    k_effective: int
    gop_ids: np.ndarray
    labels: np.ndarray
    centroids: tuple[float, ...]
    wcss: float
    log_space: bool = True

    def label_map(self) -> dict[int, int]:
        return dict(zip(self.gop_ids.tolist(), self.labels.tolist()))

    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.k_effective)


@dataclass(frozen=True)
class TierAssignment:
    cluster_to_tier: dict[int, str]
    unused_tiers: tuple[str, ...]


def clustering_values(views: np.ndarray, log_space: bool) -> np.ndarray:
    views = np.asarray(views, dtype=float)
    return np.log10(views + 1.0) if log_space else views


QUADRATIC_MAX_N = 2048


def _segment_cost_fn(x: np.ndarray, w: np.ndarray):
    """Weighted SSE of x[a..b] (inclusive) in O(1) from prefix sums.

    Values are centered first to limit cancellation in ``S2 - S1**2 / W``.
    Only used above ``QUADRATIC_MAX_N``, where clusters are wide enough for
    float64 to be sufficient.
    """
    xc = x - np.average(x, weights=w)
    cw = np.concatenate(([0.0], np.cumsum(w)))
    c1 = np.concatenate(([0.0], np.cumsum(w * xc)))
    c2 = np.concatenate(([0.0], np.cumsum(w * xc * xc)))

    def cost(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        b1 = b + 1
        sw = cw.take(b1) - cw.take(a)
        s1 = c1.take(b1) - c1.take(a)
        s2 = c2.take(b1) - c2.take(a)
        s1 *= s1
        s1 /= sw
        s2 -= s1
        return np.maximum(s2, 0.0, out=s2)

    return cost


def _cost_matrix(x: np.ndarray, w: np.ndarray) -> np.ndarray:
    """SSE of every segment x[a..b], anchored at x[a] for stability.

    Entries with b < a are +inf.
    """
    n = len(x)
    upper = np.triu(np.ones((n, n), dtype=bool))
    d = np.where(upper, x[None, :] - x[:, None], 0.0)
    ww = np.where(upper, w[None, :], 0.0)
    sw = np.cumsum(ww, axis=1)
    s1 = np.cumsum(ww * d, axis=1)
    s2 = np.cumsum(ww * d * d, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        sse = np.maximum(s2 - s1 * s1 / sw, 0.0)
    return np.where(upper, sse, np.inf)


def _fill_layer(prev: np.ndarray, j: int, n: int, cost):
    """One DP layer: best split for every prefix end i in [j, n).

    ``prev[m - 1]`` is the optimal cost of the first m points in j clusters;
    the new cluster is points m..i. Returns (layer costs, chosen starts m).
    """
    cur = np.full(n, np.inf)
    arg = np.full(n, -1, dtype=np.int64)
    lo = np.array([j], dtype=np.int64)
    hi = np.array([n - 1], dtype=np.int64)
    olo = np.array([j], dtype=np.int64)
    ohi = np.array([n - 1], dtype=np.int64)
    while len(lo):
        mid = (lo + hi) // 2
        top = np.minimum(mid, ohi)
        counts = top - olo + 1
        seg_start = np.cumsum(counts) - counts
        owner = np.repeat(np.arange(len(mid)), counts)
        m = np.arange(counts.sum()) + (olo - seg_start)[owner]
        vals = prev.take(m - 1) + cost(m, mid.take(owner))
        seg_min = np.minimum.reduceat(vals, seg_start)
        hits = np.flatnonzero(vals <= seg_min[owner])
        first = hits[np.searchsorted(hits, seg_start)]
        best = m[first]
        cur[mid] = seg_min
        arg[mid] = best

        left = mid > lo
        right = mid < hi
        lo, hi, olo, ohi = (
            np.concatenate((lo[left], mid[right] + 1)),
            np.concatenate((mid[left] - 1, hi[right])),
            np.concatenate((olo[left], best[right])),
            np.concatenate((best[left], ohi[right])),
        )
    return cur, arg


def _fill_layer_quadratic(prev: np.ndarray, j: int, costs: np.ndarray):
    n = len(prev)
    cur = np.full(n, np.inf)
    arg = np.full(n, -1, dtype=np.int64)
    # candidate starts m in [j, i]; row m of costs holds cost(m, .)
    totals = prev[j - 1:n - 1, None] + costs[j:, :]
    pick = np.argmin(totals, axis=0)
    cur[j:] = totals[pick[j:], np.arange(j, n)]
    arg[j:] = pick[j:] + j
    return cur, arg


def optimal_partition(x: np.ndarray, w: np.ndarray, k: int) -> tuple[np.ndarray, float]:
    """Start indices of the k optimal contiguous clusters of sorted ``x``.

    Among equal-cost partitions the one with leftmost boundaries (scanning
    from the last cluster back) wins. Returns (starts, DP objective).
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    n = len(x)
    if not 1 <= k <= n:
        raise InvalidArgumentError(f"need 1 <= k <= {n}, got {k}")
    if n <= QUADRATIC_MAX_N:
        costs = _cost_matrix(x, w)
        layer = costs[0].copy()
        fill = lambda prev, j: _fill_layer_quadratic(prev, j, costs)  # noqa: E731
    else:
        cost = _segment_cost_fn(x, w)
        layer = cost(np.zeros(n, dtype=np.int64), np.arange(n))
        fill = lambda prev, j: _fill_layer(prev, j, n, cost)  # noqa: E731
    back = []
    for j in range(1, k):
        layer, arg = fill(layer, j)
        back.append(arg)
    starts = [0] * k
    end = n - 1
    for j in range(k - 1, 0, -1):
        starts[j] = int(back[j - 1][end])
        end = starts[j] - 1
    return np.array(starts, dtype=np.int64), float(layer[n - 1])


def cluster_views(gops: GopCollection, k: int = 4, log_space: bool = True) -> ClusterResult:
    table = as_table(gops)
    if len(table) == 0:
        raise InvalidArgumentError("cannot cluster an empty GOP collection")
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    values = clustering_values(table.views_per_month, log_space)
    uniq, inverse, counts = np.unique(values, return_inverse=True, return_counts=True)
    k_eff = min(k, len(uniq))
    starts, _ = optimal_partition(uniq, counts.astype(float), k_eff)

    # ascending-sorted cluster c becomes label k_eff - 1 - c so label 0 is the top
    ascending = np.searchsorted(starts, np.arange(len(uniq)), side="right") - 1
    labels = (k_eff - 1 - ascending)[inverse].astype(np.int64)

    centroids = []
    wcss = 0.0
    for c in range(k_eff):
        members = values[labels == c]
        mu = float(np.mean(members))
        centroids.append(mu)
        wcss += float(np.sum((members - mu) ** 2))
    return ClusterResult(k_eff, table.gop_id.copy(), labels, tuple(centroids), wcss, log_space)


def map_clusters_to_tiers(result: ClusterResult, pricing: PricingConfig) -> TierAssignment:
    """Cluster i goes to the i-th most expensive tier."""
    names = [t.name for t in pricing.tiers]
    if result.k_effective > len(names):
        raise CapacityError(
            f"{result.k_effective} clusters but only {len(names)} storage tiers; lower k"
        )
    mapping = {c: names[c] for c in range(result.k_effective)}
    return TierAssignment(mapping, tuple(names[result.k_effective:]))
