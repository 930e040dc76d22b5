"""Shared oracles, deliberately independent of the library's algorithms.

The subset-scan matching counter checks every V/2-subset of the edge set
for disjointness and coverage; exponential, but exact and structurally
unlike both the library's backtracking and its transfer recursion, so it
can arbitrate between them on small instances.
"""

from __future__ import annotations

import itertools


def pm_count_by_subsets(n_vertices: int, edges: list[tuple[int, int]]) -> int:
    """Perfect matchings of an arbitrary small graph by exhaustive subset scan."""
    if n_vertices % 2:
        return 0
    need = n_vertices // 2
    full = (1 << n_vertices) - 1
    masks = [(1 << u) | (1 << v) for u, v in edges]
    count = 0
    for combo in itertools.combinations(masks, need):
        acc = 0
        for mask in combo:
            if acc & mask:
                break
            acc |= mask
        else:
            if acc == full:
                count += 1
    return count


def punctured_cycle_pm_count(n: int, removed: set[int]) -> int:
    """Perfect matchings of the cycle C_n with `removed` vertices deleted."""
    keep = [v for v in range(n) if v not in removed]
    relabel = {v: i for i, v in enumerate(keep)}
    edges = [(relabel[a], relabel[b]) for a, b in ((i, (i + 1) % n) for i in range(n))
             if a in relabel and b in relabel]
    edges = sorted(set(tuple(sorted(e)) for e in edges))
    return pm_count_by_subsets(len(keep), edges)
