"""Automatic threshold selection by grid search over s1 + s2.

s1 rewards clusterings whose kNN pairs rarely cross cluster boundaries
(near pairs weigh more); s2 rewards clusterings without tiny or wildly
imbalanced clusters. Both live in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_EPS, Dataset, Labels, _frozen_array
from .family_graph import OutlierPolicy, find_families
from .neighbors import NeighborLists, SparseResemblance

DEFAULT_GRID_STEP = 0.01
DEFAULT_F_MIN = 0.05
DEFAULT_ALPHA = 2.0

DIAGNOSTIC_COLUMNS = ("tau", "num_clusters", "s1", "s2", "total")


@dataclass(frozen=True)
class ThresholdDiagnostics:
    """Per-candidate record of the grid search: tau, cluster count, scores."""

    tau: np.ndarray
    num_clusters: np.ndarray
    s1: np.ndarray
    s2: np.ndarray
    total: np.ndarray

    def __post_init__(self):
        arrays = {
            "tau": np.asarray(self.tau, dtype=np.float64),
            "num_clusters": np.asarray(self.num_clusters, dtype=np.int64),
            "s1": np.asarray(self.s1, dtype=np.float64),
            "s2": np.asarray(self.s2, dtype=np.float64),
            "total": np.asarray(self.total, dtype=np.float64),
        }
        length = arrays["tau"].size
        for name, arr in arrays.items():
            if arr.ndim != 1 or arr.size != length:
                raise ValueError(f"{name} must be 1-D with {length} entries")
        for name in ("s1", "s2"):
            arr = arrays[name]
            if arr.size and (arr.min() < 0.0 or arr.max() > 1.0):
                raise ValueError(f"{name} values must lie in [0, 1]")
        for name, arr in arrays.items():
            dtype = np.int64 if name == "num_clusters" else np.float64
            object.__setattr__(self, name, _frozen_array(arr, dtype))

    def __len__(self) -> int:
        return self.tau.size

    def write_csv(self, path) -> None:
        """Dump the grid as CSV (tau, num_clusters, s1, s2, total)."""
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(",".join(DIAGNOSTIC_COLUMNS) + "\n")
            for i in range(len(self)):
                handle.write(
                    f"{float(self.tau[i])!r},{int(self.num_clusters[i])},"
                    f"{float(self.s1[i])!r},{float(self.s2[i])!r},{float(self.total[i])!r}\n"
                )


def separation_score(
    data: Dataset, nbrs: NeighborLists, labels: Labels, eps: float = DEFAULT_EPS
) -> float:
    """Distance-weighted fraction of kNN pairs staying inside one cluster.

    1 when no kNN pair crosses a cluster boundary, 0 when all do. Outliers
    keep their -1 label, so an outlier/cluster pair counts as crossing.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    values = labels.values
    weights = 1.0 / (nbrs.distances + eps)
    crossing = values[:, None] != values[nbrs.indices]
    return float(1.0 - weights[crossing].sum() / weights.sum())


def size_score(
    labels: Labels, f_min: float = DEFAULT_F_MIN, alpha: float = DEFAULT_ALPHA
) -> float:
    """Mean capped cluster-fraction term times a variance penalty.

    Fractions are taken over non-outlier clusters against the total point
    count (outliers included); population variance.
    """
    if not (0.0 < f_min < 1.0):
        raise ValueError(f"f_min must be in (0, 1), got {f_min}")
    if alpha < 1.0:
        raise ValueError(f"alpha must be at least 1, got {alpha}")
    values = labels.values
    kept = values[values >= 0]
    if kept.size == 0:
        raise ValueError("size score needs at least one non-outlier cluster")
    fractions = np.bincount(kept) / values.size
    fractions = fractions[fractions > 0]
    mean_term = np.minimum(fractions / f_min, 1.0).mean()
    return float(mean_term * np.exp(-alpha * fractions.var()))


def threshold_grid(grid_step: float) -> list[float]:
    """Candidate thresholds 1.0, 1.0 - step, ... down to (or near) 0."""
    if not (0.0 < grid_step < 1.0):
        raise ValueError(f"grid_step must be in (0, 1), got {grid_step}")
    count = math.floor(1.0 / grid_step + 1e-9)
    return [max(0.0, 1.0 - i * grid_step) for i in range(count + 1)]


def select_threshold(
    resemblance: SparseResemblance,
    data: Dataset,
    nbrs: NeighborLists,
    *,
    policy: OutlierPolicy,
    grid_step: float = DEFAULT_GRID_STEP,
    f_min: float = DEFAULT_F_MIN,
    alpha: float = DEFAULT_ALPHA,
    eps: float = DEFAULT_EPS,
) -> tuple[float, ThresholdDiagnostics]:
    """Pick the threshold maximizing s1 + s2 over a descending grid.

    Candidates that collapse everything into a single family are skipped
    whenever a multi-family candidate exists: with one cluster both scores
    are trivially perfect (the same degeneracy that makes silhouette-style
    indices undefined at c = 1), so they carry no separation information.
    Ties go to the larger threshold.
    """
    taus = threshold_grid(grid_step)
    num_clusters = np.empty(len(taus), dtype=np.int64)
    s1 = np.empty(len(taus), dtype=np.float64)
    s2 = np.empty(len(taus), dtype=np.float64)
    for i, tau in enumerate(taus):
        labels = find_families(resemblance, tau, policy)
        num_clusters[i] = labels.n_clusters
        s1[i] = separation_score(data, nbrs, labels, eps)
        s2[i] = size_score(labels, f_min, alpha)
    total = s1 + s2
    diagnostics = ThresholdDiagnostics(np.asarray(taus), num_clusters, s1, s2, total)

    candidates = [i for i in range(len(taus)) if num_clusters[i] > 1]
    if not candidates:
        candidates = list(range(len(taus)))
    best = max(candidates, key=lambda i: (total[i], taus[i]))
    return taus[best], diagnostics
