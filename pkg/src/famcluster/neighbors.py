"""kNN graph construction and the sparse resemblance matrix on its edge pattern.

Two interchangeable backends build the graph: an exhaustive search and a
KD-tree accelerated one. Both order neighbors by (distance, index), so
their outputs are identical bit for bit; the brute-force backend doubles
as the correctness oracle for the tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.spatial import cKDTree

from .core import Dataset, ResemblanceConfig, _frozen_array
from .resemblance import EdgeScore, NormalizationBounds, edge_scores, normalize_edges

KNN_BACKENDS = ("brute", "kdtree")

# Relative slack covering round-off differences between the KD-tree's
# internal metric and our exact recomputation of the same distances.
_TIE_MARGIN = 1e-9


@dataclass(frozen=True)
class NeighborLists:
    """For each point, its k nearest neighbor indices and distances.

    Rows are ordered by ascending (distance, index); a point never lists
    itself.
    """

    indices: np.ndarray
    distances: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices)
        dist = np.asarray(self.distances)
        if idx.ndim != 2 or idx.shape != dist.shape:
            raise ValueError(
                f"indices and distances must share a 2-D shape, got {idx.shape} vs {dist.shape}"
            )
        object.__setattr__(self, "indices", _frozen_array(idx, np.int64))
        object.__setattr__(self, "distances", _frozen_array(dist, np.float64))

    @property
    def n(self) -> int:
        return self.indices.shape[0]

    @property
    def k(self) -> int:
        return self.indices.shape[1]


@dataclass(frozen=True)
class SparseResemblance:
    """Normalized resemblance scores on the kNN edge pattern.

    The pattern may be asymmetric (j in kNN(i) does not imply i in kNN(j));
    at most n*k edges are stored.
    """

    indices: np.ndarray
    scores: np.ndarray
    bounds: NormalizationBounds
    n: int

    def __post_init__(self):
        idx = np.asarray(self.indices)
        sc = np.asarray(self.scores)
        if idx.shape != sc.shape or idx.ndim != 2:
            raise ValueError(
                f"indices and scores must share a 2-D shape, got {idx.shape} vs {sc.shape}"
            )
        if sc.size and (sc.min() < 0.0 or sc.max() > 1.0):
            raise ValueError("normalized scores must lie in [0, 1]")
        object.__setattr__(self, "indices", _frozen_array(idx, np.int64))
        object.__setattr__(self, "scores", _frozen_array(sc, np.float64))

    @property
    def edge_count(self) -> int:
        return self.indices.size

    def edges(self) -> Iterator[EdgeScore]:
        """Yield the stored edges as (src, dst, normalized score) records."""
        for i in range(self.indices.shape[0]):
            for j in range(self.indices.shape[1]):
                yield EdgeScore(i, int(self.indices[i, j]), float(self.scores[i, j]))


def _check_k(k: int, n: int) -> None:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k >= n:
        raise ValueError(f"k must be at most n-1 = {n - 1}, got {k}")


def _row_distances(pool: np.ndarray, point: np.ndarray) -> np.ndarray:
    # shared by every path so that tie handling sees bit-identical values
    return np.sqrt(np.sum((pool - point) ** 2, axis=1))


def _take_k(cand: np.ndarray, dist: np.ndarray, k: int) -> np.ndarray:
    """Positions of the k nearest candidates under (distance, index) order."""
    order = np.lexsort((cand, dist))
    return order[:k]


def knn_brute(data: Dataset, k: int) -> NeighborLists:
    """Exact k nearest neighbors per point by exhaustive search.

    Distance ties are broken by ascending neighbor index; a point never
    counts as its own neighbor.
    """
    pts = data.points
    n = data.n
    _check_k(k, n)
    all_idx = np.arange(n, dtype=np.int64)
    out_idx = np.empty((n, k), dtype=np.int64)
    out_dist = np.empty((n, k), dtype=np.float64)
    for i in range(n):
        dist = _row_distances(pts, pts[i])
        cand = all_idx[all_idx != i]
        take = _take_k(cand, dist[cand], k)
        out_idx[i] = cand[take]
        out_dist[i] = dist[cand[take]]
    return NeighborLists(out_idx, out_dist)


def _kdtree_rows(
    tree: cKDTree,
    pool: np.ndarray,
    queries: np.ndarray,
    k: int,
    exclude_self: bool,
) -> NeighborLists:
    n = pool.shape[0]
    m = queries.shape[0]
    # one candidate beyond the needed k (plus self when it must be dropped)
    # exposes boundary ties that may extend past the tree's answer
    extra = 2 if exclude_self else 1
    kq = min(n, k + extra)
    kd_dist, kd_idx = tree.query(queries, k=kq)
    # scipy squeezes the neighbor axis when kq == 1
    kd_dist = kd_dist.reshape(m, kq)
    kd_idx = kd_idx.reshape(m, kq)

    out_idx = np.empty((m, k), dtype=np.int64)
    out_dist = np.empty((m, k), dtype=np.float64)
    for i in range(m):
        cand = kd_idx[i].astype(np.int64)
        if exclude_self:
            cand = cand[cand != i]
        dist = _row_distances(pool[cand], queries[i])
        take = _take_k(cand, dist, k)
        boundary = dist[take[-1]]
        if kq < n and boundary * (1.0 + _TIE_MARGIN) >= kd_dist[i, -1]:
            # points beyond the tree's horizon may tie with the k-th
            # neighbor; re-gather everything within an inflated radius
            radius = kd_dist[i, -1] * (1.0 + _TIE_MARGIN) + 1e-12
            cand = np.asarray(tree.query_ball_point(queries[i], radius), dtype=np.int64)
            if exclude_self:
                cand = cand[cand != i]
            dist = _row_distances(pool[cand], queries[i])
            take = _take_k(cand, dist, k)
        out_idx[i] = cand[take]
        out_dist[i] = dist[take]
    return NeighborLists(out_idx, out_dist)


def knn_kdtree(data: Dataset, k: int) -> NeighborLists:
    """KD-tree accelerated k nearest neighbors; same contract as knn_brute."""
    pts = data.points
    _check_k(k, data.n)
    return _kdtree_rows(cKDTree(pts), pts, pts, k, exclude_self=True)


def knn_graph(data: Dataset, k: int, backend: str = "kdtree") -> NeighborLists:
    """Build the training kNN graph with the chosen backend."""
    if backend == "brute":
        return knn_brute(data, k)
    if backend == "kdtree":
        return knn_kdtree(data, k)
    raise ValueError(f"unknown kNN backend {backend!r}; expected one of {KNN_BACKENDS}")


def query_neighbors(
    data: Dataset, queries: np.ndarray, k: int, backend: str = "kdtree"
) -> NeighborLists:
    """k nearest rows of ``data`` for each query point (no self exclusion).

    Used by the out-of-sample phase, where queries are test points and the
    pool is the training set. Tie handling matches the training backends.
    """
    pts = data.points
    queries = np.asarray(queries, dtype=np.float64)
    if queries.ndim != 2 or queries.shape[1] != data.d:
        raise ValueError(
            f"queries must be 2-D with d = {data.d}, got shape {queries.shape}"
        )
    if k < 1 or k > data.n:
        raise ValueError(f"k must be in [1, {data.n}], got {k}")
    if backend == "brute":
        m = queries.shape[0]
        all_idx = np.arange(data.n, dtype=np.int64)
        out_idx = np.empty((m, k), dtype=np.int64)
        out_dist = np.empty((m, k), dtype=np.float64)
        for i in range(m):
            dist = _row_distances(pts, queries[i])
            take = _take_k(all_idx, dist, k)
            out_idx[i] = all_idx[take]
            out_dist[i] = dist[take]
        return NeighborLists(out_idx, out_dist)
    if backend == "kdtree":
        return _kdtree_rows(cKDTree(pts), pts, queries, k, exclude_self=False)
    raise ValueError(f"unknown kNN backend {backend!r}; expected one of {KNN_BACKENDS}")


def build_resemblance_matrix(
    data: Dataset, nbrs: NeighborLists, cfg: ResemblanceConfig
) -> SparseResemblance:
    """Score every kNN edge with the configured resemblance and normalize.

    The min-max bounds of the raw scores are retained for the test phase.
    """
    cfg = cfg.resolved(data.d)
    raw = edge_scores(data.points, data.points, nbrs.indices, nbrs.distances, cfg)
    normalized, bounds = normalize_edges(raw)
    return SparseResemblance(nbrs.indices, normalized, bounds, data.n)
