"""Scoring clustering output against ground truth."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OUTLIER_LABEL, Labels


@dataclass(frozen=True)
class ClusterSummary:
    """Cluster count, per-cluster sizes, and outlier count for a labeling."""

    num_clusters: int
    sizes: tuple[int, ...]
    outliers: int

    def __post_init__(self):
        if self.num_clusters != len(self.sizes):
            raise ValueError("num_clusters must match the number of sizes")
        if self.outliers < 0 or any(s <= 0 for s in self.sizes):
            raise ValueError("sizes must be positive and outliers non-negative")

    @property
    def total(self) -> int:
        return sum(self.sizes) + self.outliers


def summarize(labels: Labels) -> ClusterSummary:
    """Count clusters, their sizes, and outliers."""
    values = labels.values
    kept = values[values >= 0]
    ids, counts = np.unique(kept, return_counts=True)
    return ClusterSummary(
        num_clusters=int(ids.size),
        sizes=tuple(int(c) for c in counts),
        outliers=int(np.count_nonzero(values == OUTLIER_LABEL)),
    )


def adjusted_rand_index(a, b) -> float:
    """Chance-corrected pair-counting agreement between two labelings.

    1 for identical partitions, ~0 for independent ones. Outliers (-1)
    count as one ordinary group on each side.
    """
    a = np.asarray(a, dtype=np.int64).ravel()
    b = np.asarray(b, dtype=np.int64).ravel()
    if a.size != b.size:
        raise ValueError(f"label lengths differ: {a.size} vs {b.size}")
    n = a.size
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    contingency = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(contingency, (ai, bi), 1)

    def comb2(x):
        return x * (x - 1) // 2

    pair_agree = int(comb2(contingency).sum())
    pairs_a = int(comb2(contingency.sum(axis=1)).sum())
    pairs_b = int(comb2(contingency.sum(axis=0)).sum())
    expected = pairs_a * pairs_b / comb2(n)
    maximum = (pairs_a + pairs_b) / 2.0
    if maximum == expected:
        return 1.0
    return float((pair_agree - expected) / (maximum - expected))
