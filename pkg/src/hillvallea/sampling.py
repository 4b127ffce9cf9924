"""Initial-population sampling.

Three stages feed each restart: uniform draws, rejection against the
previous restart's clustered population (to bias away from basins that
are already represented), and greedy scattered subset selection from 2N
candidates down to N. None of these consume objective evaluations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .bounds import Bounds

REJECTION_PROBABILITY = 0.9
MAX_REDRAWS = 100


@dataclass(frozen=True, eq=False)
class LabeledHistory:
    """Previous restart's initial population with its cluster labels."""

    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        if len(self.points) != len(self.labels):
            raise ValueError("points and labels must have equal length")

    def __len__(self) -> int:
        return len(self.points)


EMPTY_HISTORY = LabeledHistory(np.empty((0, 0)), np.empty(0, dtype=int))


def sample_uniform(n: int, bounds: Bounds,
                   rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(bounds.lower, bounds.upper, size=(n, bounds.d))


def rejection_sample(n: int, bounds: Bounds, history: LabeledHistory,
                     rng: np.random.Generator,
                     return_stats: bool = False):
    """Draw n points uniformly, rejecting a draw with probability 0.9
    when its nearest d+1 history points all carry one cluster label.
    Each slot is redrawn at most MAX_REDRAWS times, then the final draw
    is accepted unconditionally."""
    if len(history) == 0:
        out = sample_uniform(n, bounds, rng)
        if return_stats:
            return out, {"draws": n, "rejections": 0}
        return out

    k = min(bounds.d + 1, len(history))
    if bounds.d == 1 and k == 2:
        hist_order = np.argsort(history.points[:, 0], kind="stable")
        hist_sorted = history.points[hist_order, 0]
        labels_sorted = history.labels[hist_order]
        tree = None
    else:
        tree = cKDTree(history.points)
    out = np.empty((n, bounds.d))
    unfilled = np.arange(n)
    draws = 0
    rejections = 0
    for round_no in range(MAX_REDRAWS + 1):
        m = len(unfilled)
        candidates = sample_uniform(m, bounds, rng)
        draws += m
        if round_no == MAX_REDRAWS:
            out[unfilled] = candidates
            break
        if tree is None:
            single_basin = _flanking_pair_same_label(
                candidates[:, 0], hist_sorted, labels_sorted)
        else:
            idx = tree.query(candidates, k=k)[1]
            if k == 1:
                idx = idx[:, None]
            neighbor_labels = history.labels[idx]
            single_basin = (neighbor_labels
                            == neighbor_labels[:, :1]).all(axis=1)
        reject = single_basin & (rng.uniform(size=m) < REJECTION_PROBABILITY)
        rejections += int(reject.sum())
        accepted = unfilled[~reject]
        out[accepted] = candidates[~reject]
        unfilled = unfilled[reject]
        if len(unfilled) == 0:
            break
    if return_stats:
        return out, {"draws": draws, "rejections": rejections}
    return out


def _flanking_pair_same_label(q: np.ndarray, hist_sorted: np.ndarray,
                              labels_sorted: np.ndarray) -> np.ndarray:
    """Whether each query's two nearest history points share one label.
    In one dimension the two nearest neighbors are a contiguous window
    in sorted order, so a binary search replaces a tree query."""
    h = len(hist_sorted)
    pos = np.searchsorted(hist_sorted, q)
    left = np.clip(pos - 1, 0, h - 1)
    right = np.clip(pos, 0, h - 1)
    first = np.where(np.abs(q - hist_sorted[left])
                     <= np.abs(hist_sorted[right] - q), left, right)
    lo = np.clip(first - 1, 0, h - 1)
    hi = np.clip(first + 1, 0, h - 1)
    d_lo = np.where(first == 0, np.inf, np.abs(q - hist_sorted[lo]))
    d_hi = np.where(first == h - 1, np.inf, np.abs(hist_sorted[hi] - q))
    second = np.where(d_lo <= d_hi, lo, hi)
    return labels_sorted[first] == labels_sorted[second]


def greedy_scattered_subset(candidates: np.ndarray, k: int) -> np.ndarray:
    """Farthest-point subset: seed with the candidate farthest from the
    centroid, then repeatedly add the candidate maximizing the minimum
    distance to the chosen set. Ties break to the lowest index."""
    candidates = np.asarray(candidates, dtype=float)
    n = len(candidates)
    if k > n:
        raise ValueError(f"cannot select {k} of {n} candidates")
    if k == 0:
        return candidates[:0]
    centroid = candidates.mean(axis=0)
    seed = int(np.argmax(((candidates - centroid) ** 2).sum(axis=1)))
    if n <= _EAGER_LIMIT:
        chosen = _eager_farthest_points(candidates, k, seed)
    elif candidates.shape[1] <= 3:
        chosen = _grid_farthest_points(candidates, k, seed)
    else:
        chosen = _gemv_farthest_points(candidates, k, seed)
    return candidates[chosen]


_EAGER_LIMIT = 2048
_BLOCK = 1024
_BLOCK_SHIFT = 10
# Ring sizes up to this many points are refreshed with scalar python
# arithmetic; beyond it the vectorized gather wins. Speed-only knob —
# both routes compute identical IEEE doubles.
_SCALAR_RING_LIMIT = 48


def _eager_farthest_points(candidates: np.ndarray, k: int,
                           seed: int) -> list[int]:
    chosen = [seed]
    min_d2 = ((candidates - candidates[seed]) ** 2).sum(axis=1)
    min_d2[seed] = -np.inf  # never re-pick a chosen candidate
    for _ in range(k - 1):
        nxt = int(np.argmax(min_d2))
        chosen.append(nxt)
        np.minimum(min_d2, ((candidates - candidates[nxt]) ** 2).sum(axis=1),
                   out=min_d2)
        min_d2[nxt] = -np.inf
    return chosen


def _gemv_farthest_points(candidates: np.ndarray, k: int,
                          seed: int) -> np.ndarray:
    """Eager refresh written as norms + one matrix-vector product per
    pick, which keeps the per-pick cost to a few in-place passes for
    wide (d >= 4) candidate arrays."""
    n = len(candidates)
    chosen = np.empty(k, dtype=np.intp)
    chosen[0] = seed
    norms = np.einsum("ij,ij->i", candidates, candidates)
    buf = np.empty(n)
    min_d2 = ((candidates - candidates[seed]) ** 2).sum(axis=1)
    min_d2[seed] = -np.inf
    for m in range(1, k):
        j = int(np.argmax(min_d2))
        chosen[m] = j
        np.dot(candidates, candidates[j], out=buf)
        buf *= -2.0
        buf += norms
        buf += norms[j]
        np.minimum(min_d2, buf, out=min_d2)
        min_d2[j] = -np.inf
    return chosen


def _grid_farthest_points(candidates: np.ndarray, k: int,
                          seed: int) -> np.ndarray:
    """Grid-accelerated variant of the same selection for d <= 3. Each
    pick is still the exact argmax of the cached minimum distances, so
    the chosen indices match the eager loop; the grid only limits which
    cached values a new pick has to refresh (a candidate farther from
    the pick than the current max-min distance cannot shrink)."""
    n, d = candidates.shape
    lo = candidates.min(axis=0)
    span = candidates.max(axis=0) - lo
    vol = float(np.prod(np.maximum(span, 1e-300)))
    mx = int(np.ceil((4.0 * k) ** (1.0 / d))) + 1
    h = max((vol / k) ** (1.0 / d), float(span.max()) / mx, 1e-300)
    nx = np.maximum((span / h).astype(np.int64) + 1, 1)
    strides = np.concatenate(([1], np.cumprod(nx[:-1])))
    ncells = int(nx.prod())
    cell = ((candidates - lo) / h).astype(np.int64)
    np.minimum(cell, nx - 1, out=cell)
    flat = cell @ strides
    order = np.argsort(flat, kind="stable")
    starts = np.searchsorted(flat[order], np.arange(ncells + 1))

    mind2 = ((candidates - candidates[seed]) ** 2).sum(axis=1)
    mind2[seed] = -np.inf
    block_starts = np.arange(0, n, _BLOCK)
    blockmax = np.maximum.reduceat(mind2, block_starts)
    dirty = np.zeros(len(blockmax), dtype=bool)
    chosen = np.empty(k, dtype=np.intp)
    chosen[0] = seed
    # Plain-python mirrors of the geometry: a typical ring holds only a
    # handful of points, so most refreshes run as scalar arithmetic
    # (IEEE-identical to the vector route) instead of numpy dispatch on
    # tiny arrays; large rings fall back to the vectorized gather.
    xs_flat = candidates.ravel().tolist()
    order_l = order.tolist()
    starts_l = starts.tolist()
    inv_h = 1.0 / h
    lo0 = float(lo[0])
    n0 = int(nx[0])
    lo1 = float(lo[1]) if d > 1 else 0.0
    n1 = int(nx[1]) if d > 1 else 1
    lo2 = float(lo[2]) if d > 2 else 0.0
    n2 = int(nx[2]) if d > 2 else 1
    for m in range(1, k):
        while True:
            b = int(blockmax.argmax())
            if not dirty[b]:
                break
            base = b << _BLOCK_SHIFT
            blockmax[b] = mind2[base:base + _BLOCK].max()
            dirty[b] = False
        base = b << _BLOCK_SHIFT
        j = base + int(mind2[base:base + _BLOCK].argmax())
        chosen[m] = j
        r2 = float(mind2[j])
        mind2[j] = -np.inf
        dirty[b] = True
        if r2 <= 0.0:
            # only exact duplicates of already-picked points remain at
            # distance zero, and their cached values are already zero
            continue
        r = math.sqrt(r2)
        x0 = xs_flat[j * d]
        c0a = int((x0 - r - lo0) * inv_h)
        c0a = 0 if c0a < 0 else (n0 - 1 if c0a > n0 - 1 else c0a)
        c0b = int((x0 + r - lo0) * inv_h)
        c0b = 0 if c0b < 0 else (n0 - 1 if c0b > n0 - 1 else c0b)
        x1 = x2 = 0.0
        c1a = c1b = c2a = c2b = 0
        if d > 1:
            x1 = xs_flat[j * d + 1]
            c1a = int((x1 - r - lo1) * inv_h)
            c1a = 0 if c1a < 0 else (n1 - 1 if c1a > n1 - 1 else c1a)
            c1b = int((x1 + r - lo1) * inv_h)
            c1b = 0 if c1b < 0 else (n1 - 1 if c1b > n1 - 1 else c1b)
        if d > 2:
            x2 = xs_flat[j * d + 2]
            c2a = int((x2 - r - lo2) * inv_h)
            c2a = 0 if c2a < 0 else (n2 - 1 if c2a > n2 - 1 else c2a)
            c2b = int((x2 + r - lo2) * inv_h)
            c2b = 0 if c2b < 0 else (n2 - 1 if c2b > n2 - 1 else c2b)
        if (c0a == 0 and c0b == n0 - 1 and c1a == 0 and c1b == n1 - 1
                and c2a == 0 and c2b == n2 - 1):
            dif = candidates - candidates[j]
            dd = (dif * dif).sum(axis=1)
            np.minimum(mind2, dd, out=mind2)
            np.maximum.reduceat(mind2, block_starts, out=blockmax)
            dirty[:] = False
            continue
        rows = []
        cnt = 0
        for cell2 in range(c2a, c2b + 1):
            rowbase = (cell2 * n1 + c1a) * n0
            for _ in range(c1a, c1b + 1):
                a = starts_l[rowbase + c0a]
                e = starts_l[rowbase + c0b + 1]
                if e > a:
                    rows.append((a, e))
                    cnt += e - a
                rowbase += n0
        if cnt == 0:
            continue
        # A block needs revalidation only when the entry that shrank was
        # carrying its cached max; shrinking any other entry leaves the
        # cached max exact.
        if cnt <= _SCALAR_RING_LIMIT:
            if d == 1:
                for a, e in rows:
                    for t in range(a, e):
                        p = order_l[t]
                        dx = xs_flat[p] - x0
                        dd = dx * dx
                        vold = mind2[p]
                        if dd < vold:
                            mind2[p] = dd
                            blk = p >> _BLOCK_SHIFT
                            if vold >= blockmax[blk]:
                                dirty[blk] = True
            elif d == 2:
                for a, e in rows:
                    for t in range(a, e):
                        p = order_l[t]
                        q = 2 * p
                        dx = xs_flat[q] - x0
                        dy = xs_flat[q + 1] - x1
                        dd = dx * dx + dy * dy
                        vold = mind2[p]
                        if dd < vold:
                            mind2[p] = dd
                            blk = p >> _BLOCK_SHIFT
                            if vold >= blockmax[blk]:
                                dirty[blk] = True
            else:
                for a, e in rows:
                    for t in range(a, e):
                        p = order_l[t]
                        q = 3 * p
                        dx = xs_flat[q] - x0
                        dy = xs_flat[q + 1] - x1
                        dz = xs_flat[q + 2] - x2
                        dd = dx * dx + dy * dy + dz * dz
                        vold = mind2[p]
                        if dd < vold:
                            mind2[p] = dd
                            blk = p >> _BLOCK_SHIFT
                            if vold >= blockmax[blk]:
                                dirty[blk] = True
            continue
        gathered = (order[rows[0][0]:rows[0][1]] if len(rows) == 1 else
                    np.concatenate([order[a:e] for a, e in rows]))
        dif = candidates[gathered] - candidates[j]
        dd = (dif * dif).sum(axis=1)
        old = mind2[gathered]
        shrunk = dd < old
        hit = gathered[shrunk]
        if hit.size:
            mind2[hit] = dd[shrunk]
            bidx = hit >> _BLOCK_SHIFT
            stale = old[shrunk] >= blockmax[bidx]
            dirty[bidx[stale]] = True
    return chosen


def sample_initial_population(n: int, bounds: Bounds, history: LabeledHistory,
                              rng: np.random.Generator) -> np.ndarray:
    """Draw 2N candidates with rejection, keep the N most scattered."""
    if n < 1:
        raise ValueError("population size must be at least 1")
    candidates = rejection_sample(2 * n, bounds, history, rng)
    return greedy_scattered_subset(candidates, n)
