"""Shared domain types and the Euclidean distance primitive."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Sentinel label for points marked as outliers.
OUTLIER_LABEL = -1

#: Stability constant used by the log resemblance and the separation score.
DEFAULT_EPS = 1e-8

RESEMBLANCE_KINDS = ("log", "cosine", "rbf", "sigmoid")


def _frozen_array(values, dtype) -> np.ndarray:
    out = np.ascontiguousarray(values, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Dataset:
    """n points in d-dimensional real space, one row per point.

    Entries must be finite; the array is copied and frozen so instances
    are safe to share across threads.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError(f"points must be a 2-D array, got shape {pts.shape}")
        n, d = pts.shape
        if n < 1 or d < 1:
            raise ValueError(f"dataset needs n >= 1 and d >= 1, got {n} x {d}")
        if not np.isfinite(pts).all():
            raise ValueError("points contain NaN or Inf")
        object.__setattr__(self, "points", _frozen_array(pts, np.float64))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.points, dtype=dtype)


@dataclass(frozen=True)
class Labels:
    """Per-point integer cluster ids; ``OUTLIER_LABEL`` (-1) marks outliers.

    Non-outlier ids produced by this package always form a contiguous
    range ``0..c-1`` ordered by each cluster's smallest member index.
    """

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1:
            raise ValueError(f"labels must be 1-D, got shape {vals.shape}")
        if vals.size and not np.issubdtype(vals.dtype, np.integer):
            raise ValueError(f"labels must be integers, got dtype {vals.dtype}")
        vals = vals.astype(np.int64, copy=False)
        if vals.size and vals.min() < OUTLIER_LABEL:
            raise ValueError("labels below the outlier sentinel -1 are invalid")
        object.__setattr__(self, "values", _frozen_array(vals, np.int64))

    @property
    def n_clusters(self) -> int:
        """Number of distinct non-outlier cluster ids."""
        positive = self.values[self.values >= 0]
        return int(np.unique(positive).size)

    @property
    def n_outliers(self) -> int:
        return int(np.count_nonzero(self.values == OUTLIER_LABEL))

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True)
class ResemblanceConfig:
    """Choice of resemblance function plus its parameters.

    ``gamma=None`` means "resolve to 1/d when the data dimension is known";
    see :meth:`resolved`.
    """

    kind: str
    eps: float = DEFAULT_EPS
    gamma: float | None = None
    coef0: float = 0.0

    def __post_init__(self):
        if self.kind not in RESEMBLANCE_KINDS:
            raise ValueError(
                f"unknown resemblance kind {self.kind!r}; expected one of {RESEMBLANCE_KINDS}"
            )
        if not (np.isfinite(self.eps) and self.eps > 0):
            raise ValueError(f"eps must be a positive finite real, got {self.eps}")
        if self.gamma is not None and not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be a positive finite real, got {self.gamma}")
        if not np.isfinite(self.coef0):
            raise ValueError(f"coef0 must be finite, got {self.coef0}")

    def resolved(self, d: int) -> "ResemblanceConfig":
        """Return a config with gamma fixed (default 1/d) for kernel kinds."""
        if self.kind in ("rbf", "sigmoid") and self.gamma is None:
            return ResemblanceConfig(self.kind, self.eps, 1.0 / d, self.coef0)
        return self


def euclidean_distance(a, b) -> float:
    """L2 distance between two points of equal dimension."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.sqrt(np.sum((a - b) ** 2)))
