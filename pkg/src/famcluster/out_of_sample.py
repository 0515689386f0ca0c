"""Out-of-sample assignment: label unseen points from a fitted model.

Each test point inherits the label of its most-resembling training
neighbor, provided that resemblance (rescaled to the training range and
clipped to [0, 1]) clears the threshold; otherwise it is an outlier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OUTLIER_LABEL, Dataset, Labels, ResemblanceConfig
from .neighbors import query_neighbors
from .resemblance import NormalizationBounds, edge_scores


@dataclass(frozen=True)
class ModelState:
    """Everything the test phase needs from a training run."""

    train: Dataset
    labels: Labels
    config: ResemblanceConfig
    k: int
    tau: float
    bounds: NormalizationBounds

    def __post_init__(self):
        if len(self.labels) != self.train.n:
            raise ValueError(
                f"labels length {len(self.labels)} does not match training n = {self.train.n}"
            )
        if not (1 <= self.k <= self.train.n - 1):
            raise ValueError(f"k must be in [1, {self.train.n - 1}], got {self.k}")
        if not (np.isfinite(self.tau) and 0.0 <= self.tau <= 1.0):
            raise ValueError(f"tau must be in [0, 1], got {self.tau}")
        if self.config.kind in ("rbf", "sigmoid") and self.config.gamma is None:
            raise ValueError("model config must carry a resolved gamma")


def _as_points(test) -> np.ndarray:
    if isinstance(test, Dataset):
        return test.points
    pts = np.asarray(test, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"test points must be 2-D, got shape {pts.shape}")
    if pts.size and not np.isfinite(pts).all():
        raise ValueError("test points contain NaN or Inf")
    return pts


def resemblance_scores(
    model: ModelState, test, backend: str = "kdtree"
) -> tuple[np.ndarray, np.ndarray]:
    """Neighbor indices and clipped normalized resemblances per test point.

    Resemblances to the k nearest training points are rescaled with the
    training bounds and clipped into [0, 1]. Returns (indices, scores),
    each of shape (n_test, k).
    """
    points = _as_points(test)
    if points.shape[1] != model.train.d:
        raise ValueError(
            f"test dimension {points.shape[1]} does not match training d = {model.train.d}"
        )
    if points.shape[0] == 0:
        empty = np.empty((0, model.k))
        return empty.astype(np.int64), empty.astype(np.float64)
    nbrs = query_neighbors(model.train, points, model.k, backend)
    raw = edge_scores(points, model.train.points, nbrs.indices, nbrs.distances, model.config)
    if model.bounds.degenerate:
        # limit of (raw - r_min)/span with clipping; the boundary raw == r_min
        # maps to 1, mirroring the degenerate training rule
        normalized = np.where(raw >= model.bounds.r_min, 1.0, 0.0)
    else:
        normalized = (raw - model.bounds.r_min) / model.bounds.span
    return nbrs.indices, np.clip(normalized, 0.0, 1.0)


def predict(model: ModelState, test, backend: str = "kdtree") -> Labels:
    """Assign each test point a training cluster label or -1.

    The label comes from the training neighbor with the highest clipped
    normalized resemblance (ties to the lowest training index) when that
    score reaches tau; training outliers pass their -1 on.
    """
    indices, scores = resemblance_scores(model, test, backend)
    if indices.shape[0] == 0:
        return Labels(np.empty(0, dtype=np.int64))
    best = scores.max(axis=1)
    # argmax with ties resolved toward the smallest training index
    tied = scores == best[:, None]
    winner = np.where(tied, indices, model.train.n).min(axis=1)
    assigned = model.labels.values[winner]
    return Labels(np.where(best >= model.tau, assigned, OUTLIER_LABEL))
