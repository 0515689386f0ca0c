"""Thresholded resemblance graph, connected-component families, outlier marking.

A family is a connected component of the symmetrized adjacency graph:
points chained through strong-enough resemblances belong together even
when the chain's endpoints barely resemble each other directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OUTLIER_LABEL, Labels, _frozen_array
from .neighbors import SparseResemblance

OUTLIER_MODES = ("none", "ratio", "statistical")


@dataclass(frozen=True)
class Adjacency:
    """Undirected binary graph over n nodes.

    Edges are stored once with u < v; every node carries an implicit
    self-loop, so isolated nodes still form singleton components.
    """

    n: int
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u)
        v = np.asarray(self.v)
        if u.shape != v.shape or u.ndim != 1:
            raise ValueError("edge endpoint arrays must be 1-D and equal length")
        if u.size and not ((u < v).all() and u.min() >= 0 and v.max() < self.n):
            raise ValueError("edges must satisfy 0 <= u < v < n")
        object.__setattr__(self, "u", _frozen_array(u, np.int64))
        object.__setattr__(self, "v", _frozen_array(v, np.int64))

    @property
    def edge_count(self) -> int:
        return self.u.size

    def neighbor_lists(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in zip(self.u.tolist(), self.v.tolist()):
            out[a].append(b)
            out[b].append(a)
        return out


@dataclass(frozen=True)
class OutlierPolicy:
    """How tiny families get marked as outliers.

    ``ratio`` drops clusters smaller than ratio * max cluster size;
    ``statistical`` drops clusters smaller than mean - num_std * std of the
    cluster sizes (population std); ``none`` keeps everything.
    """

    mode: str = "none"
    ratio: float = 0.05
    num_std: float = 2.0

    def __post_init__(self):
        if self.mode not in OUTLIER_MODES:
            raise ValueError(f"unknown outlier mode {self.mode!r}; expected one of {OUTLIER_MODES}")
        if not (0.0 < self.ratio < 1.0):
            raise ValueError(f"ratio must be in (0, 1), got {self.ratio}")
        if self.num_std <= 0:
            raise ValueError(f"num_std must be positive, got {self.num_std}")


def threshold_adjacency(resemblance: SparseResemblance, tau: float) -> Adjacency:
    """Keep edges with normalized score >= tau, then symmetrize with OR.

    The OR union (rather than mutual kNN) preserves resemblance chains in
    which only one endpoint lists the other as a neighbor.
    """
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    n = resemblance.n
    mask = resemblance.scores >= tau
    src = np.broadcast_to(
        np.arange(n, dtype=np.int64)[:, None], resemblance.indices.shape
    )[mask]
    dst = resemblance.indices[mask]
    lo = np.minimum(src, dst)
    hi = np.maximum(src, dst)
    keys = np.unique(lo * np.int64(n) + hi)
    return Adjacency(n, keys // n, keys % n)


def connected_components(adj: Adjacency) -> Labels:
    """Label each connected component, numbered by smallest member index.

    Iterative depth-first search; self-loops guarantee every node lands in
    some component, so isolated nodes become singletons.
    """
    labels = np.full(adj.n, -1, dtype=np.int64)
    nbrs = adj.neighbor_lists()
    current = 0
    for start in range(adj.n):
        if labels[start] != -1:
            continue
        labels[start] = current
        stack = [start]
        while stack:
            node = stack.pop()
            for other in nbrs[node]:
                if labels[other] == -1:
                    labels[other] = current
                    stack.append(other)
        current += 1
    return Labels(labels)


class _UnionFind:
    """Disjoint sets with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def connected_components_union_find(adj: Adjacency) -> Labels:
    """Union-find route to the same partition; oracle for the DFS version."""
    uf = _UnionFind(adj.n)
    for a, b in zip(adj.u.tolist(), adj.v.tolist()):
        uf.union(a, b)
    labels = np.full(adj.n, -1, dtype=np.int64)
    root_label: dict[int, int] = {}
    for node in range(adj.n):
        root = uf.find(node)
        if root not in root_label:
            root_label[root] = len(root_label)
        labels[node] = root_label[root]
    return Labels(labels)


def mark_outliers(labels: Labels, policy: OutlierPolicy) -> Labels:
    """Send whole tiny clusters to the outlier label -1.

    Surviving clusters are relabeled contiguously, preserving their
    smallest-member order; points never move between surviving clusters.
    """
    if policy.mode == "none":
        return labels
    values = labels.values
    if (values == OUTLIER_LABEL).any():
        raise ValueError("labels already contain the outlier sentinel")
    sizes = np.bincount(values)
    if policy.mode == "ratio":
        cutoff = policy.ratio * sizes.max()
    else:
        cutoff = sizes.mean() - policy.num_std * sizes.std()
    doomed = sizes < cutoff
    remap = np.where(doomed, OUTLIER_LABEL, np.cumsum(~doomed) - 1)
    return Labels(remap[values])


def find_families(
    resemblance: SparseResemblance, tau: float, policy: OutlierPolicy
) -> Labels:
    """Threshold, symmetrize, extract components, mark tiny clusters."""
    adj = threshold_adjacency(resemblance, tau)
    return mark_outliers(connected_components(adj), policy)
