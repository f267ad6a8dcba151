"""Independent reference computations used as test oracles.

Nothing here imports the package; each function recomputes a quantity the
slow, obvious way.
"""
from itertools import combinations


def segment_sse(values):
    mu = sum(values) / len(values)
    return sum((v - mu) ** 2 for v in values)


def contiguous_partitions(sorted_values, k):
    n = len(sorted_values)
    for cuts in combinations(range(1, n), k - 1):
        edges = (0, *cuts, n)
        yield [sorted_values[a:b] for a, b in zip(edges, edges[1:])]


def brute_force_kmeans(values, k):
    """(min wcss, best partition) over all contiguous k-partitions.

    Ties keep the first partition in enumeration order.
    """
    ordered = sorted(values)
    best, best_parts = None, None
    for parts in contiguous_partitions(ordered, k):
        w = sum(segment_sse(p) for p in parts)
        if best is None or w < best:
            best, best_parts = w, parts
    return best, best_parts


def per_gop_cheapest_total(rows, top_price, vm_price):
    """Sum over GOPs of min(store on top tier, re-transcode every view).

    ``rows`` are (size_mb, transcode_time_s, views_per_month) triples.
    Storing only wins when strictly cheaper.
    """
    total = 0.0
    for size_mb, ttime, views in rows:
        store = size_mb / 1024 * top_price
        retranscode = views * ttime / 3600 * vm_price
        total += store if store < retranscode else retranscode
    return total
