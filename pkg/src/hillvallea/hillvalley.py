"""Niche detection.

Two solutions share a niche when no sampled point on the segment
between them falls below the worse endpoint's fitness. Clustering walks
a fitness-sorted selection, testing each solution against its nearest
better solutions in distinct clusters; cheap pairs in the worse half of
the selection within one expected edge length of their nearest better
solution are merged without spending evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.distance import cdist

from .bounds import Bounds
from .problems.evaluator import BudgetExhaustedError, Evaluator, Solution

TEST_POINT_CAP = 10
_CHUNK = 128
# Spatial neighbors fetched per worse-half solution; nearly every such
# solution has a previous (fitter) solution among its nearest few, so
# the exact full prefix scan is only a fallback.
_FORCE_KNN = 16


@dataclass(eq=False)
class Cluster:
    members: list[Solution]
    best: int

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("cluster must have at least one member")

    @property
    def best_solution(self) -> Solution:
        return self.members[self.best]


def expected_edge_length(n: int, bounds: Bounds) -> float:
    """Typical nearest-neighbor spacing of n uniform points in the box."""
    return float((bounds.volume / n) ** (1.0 / bounds.d))


def n_test_points(dist: float, eel: float) -> int:
    return min(TEST_POINT_CAP, 1 + int(dist / eel))


def hill_valley_test(ev: Evaluator, a: Solution, b: Solution,
                     n_t: int) -> bool:
    """True when a and b appear to share a niche: none of n_t equally
    spaced points between them scores below min(a.f, b.f). Short-circuits
    on the first counterexample. The test-point set is generated from the
    lexicographically smaller endpoint so that swapping a and b probes
    bit-identical points."""
    if a is b or np.array_equal(a.x, b.x):
        return True
    lo, hi = (a, b) if tuple(a.x) <= tuple(b.x) else (b, a)
    f_min = min(a.f, b.f)
    step = (hi.x - lo.x) / (n_t + 1)
    for k in range(1, n_t + 1):
        if ev.evaluate(lo.x + k * step) < f_min:
            return False
    return True


def hill_valley_clustering(selection: list[Solution], ev: Evaluator,
                           bounds: Bounds) -> list[Cluster]:
    """Partition a fitness-descending selection into niches.

    Each solution is tested against at most d+1 nearest better solutions
    from distinct clusters, nearest first. Worse-half solutions within
    one expected edge length of a candidate join its cluster untested.
    On budget exhaustion every not-yet-clustered solution becomes a
    singleton cluster.
    """
    s_count = len(selection)
    if s_count == 0:
        raise ValueError("selection must be non-empty")
    fitness = np.array([s.f for s in selection])
    if np.any(np.diff(fitness) > 0):
        raise ValueError("selection must be sorted by fitness, best first")

    eel = expected_edge_length(s_count, bounds)
    positions = np.array([s.x for s in selection])
    worse_half_start = -(-s_count // 2)
    max_candidates = bounds.d + 1

    clusters = [Cluster([selection[0]], 0)]
    assigned = np.zeros(s_count, dtype=int)
    exhausted = False

    def walk(i: int, row: np.ndarray) -> int:
        """Assign solution i by testing nearest previous solutions in
        distinct clusters; returns the cluster index or -1."""
        nonlocal exhausted
        s = selection[i]
        seen: set[int] = set()
        try:
            for j in _nearest_previous(row):
                c = int(assigned[j])
                if c in seen:
                    continue
                seen.add(c)
                n_t = n_test_points(math.sqrt(row[j]), eel)
                if i >= worse_half_start and n_t == 1:
                    return c
                if hill_valley_test(ev, s, selection[j], n_t):
                    return c
                if len(seen) == max_candidates:
                    break
        except BudgetExhaustedError:
            exhausted = True
        return -1

    def place(i: int, target: int) -> None:
        if target >= 0:
            clusters[target].members.append(selection[i])
            assigned[i] = target
        else:
            clusters.append(Cluster([selection[i]], 0))
            assigned[i] = len(clusters) - 1

    # Better half: every solution is tested, so the full prefix
    # distances are needed anyway; compute them in chunks.
    for start in range(1, worse_half_start, _CHUNK):
        stop = min(start + _CHUNK, worse_half_start)
        d2_block = None
        for i in range(start, stop):
            target = -1
            if not exhausted:
                if d2_block is None:
                    d2_block = cdist(positions[start:stop],
                                     positions[:stop - 1], "sqeuclidean")
                target = walk(i, d2_block[i - start, :i])
            place(i, target)

    # Worse half: almost every solution sits within one expected edge
    # length of a previous solution and joins its cluster untested, so
    # the nearest previous solution is looked up among a few exact
    # spatial neighbors instead of a full prefix scan; ties and misses
    # fall back to the exact scan.
    if worse_half_start < s_count and not exhausted:
        kq = min(_FORCE_KNN, s_count)
        dd, ii = cKDTree(positions).query(positions[worse_half_start:], k=kq)
        prev = ii < np.arange(worse_half_start, s_count)[:, None]
        d_prev = np.where(prev, dd, np.inf)
        best_d = d_prev.min(axis=1)
        tied = np.where(d_prev == best_d[:, None], ii, s_count)
        nearest_k = tied.min(axis=1)
        for i in range(worse_half_start, s_count):
            target = -1
            if not exhausted:
                r = i - worse_half_start
                dist = float(best_d[r])
                row = None
                if math.isinf(dist):
                    row = ((positions[:i] - positions[i]) ** 2).sum(axis=1)
                    nearest = int(np.argmin(row))
                    dist = math.sqrt(float(row[nearest]))
                else:
                    nearest = int(nearest_k[r])
                if n_test_points(dist, eel) == 1:
                    target = int(assigned[nearest])
                else:
                    if row is None:
                        row = ((positions[:i] - positions[i]) ** 2
                               ).sum(axis=1)
                    target = walk(i, row)
            place(i, target)
    else:
        for i in range(worse_half_start, s_count):
            place(i, -1)
    return clusters


def _nearest_previous(row: np.ndarray):
    """Yield row indices in (value, index) order, refining a partial
    partition lazily so the common short walk never pays a full sort."""
    n = len(row)
    if n <= 16:
        for j in np.argsort(row, kind="stable"):
            yield int(j)
        return
    yielded = 0
    k = 8
    while k < n:
        part = np.argpartition(row, k - 1)[:k]
        threshold = row[part].max()
        prefix = np.flatnonzero(row <= threshold)
        prefix = prefix[np.lexsort((prefix, row[prefix]))]
        for j in prefix[yielded:]:
            yield int(j)
        yielded = len(prefix)
        k *= 4
    full = np.argsort(row, kind="stable")
    for j in full[yielded:]:
        yield int(j)
