"""Resemblance scores between point pairs and min-max edge normalization.

All resemblance functions are symmetric and increase with similarity:
``log`` and ``rbf`` decay with Euclidean distance, ``cosine`` and
``sigmoid`` grow with the inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_EPS, ResemblanceConfig


@dataclass(frozen=True)
class EdgeScore:
    """One directed resemblance edge; self-pairs are never stored."""

    src: int
    dst: int
    score: float

    def __post_init__(self):
        if self.src == self.dst:
            raise ValueError(f"self-pair ({self.src}, {self.dst}) is not a valid edge")
        if not np.isfinite(self.score):
            raise ValueError(f"edge score must be finite, got {self.score}")


@dataclass(frozen=True)
class NormalizationBounds:
    """Min and max raw resemblance over the stored edges of a training fit."""

    r_min: float
    r_max: float

    def __post_init__(self):
        if not (np.isfinite(self.r_min) and np.isfinite(self.r_max)):
            raise ValueError("normalization bounds must be finite")
        if self.r_min > self.r_max:
            raise ValueError(f"r_min {self.r_min} exceeds r_max {self.r_max}")

    @property
    def span(self) -> float:
        return self.r_max - self.r_min

    @property
    def degenerate(self) -> bool:
        return self.r_max == self.r_min


def log_resemblance(x1, x2, eps: float = DEFAULT_EPS) -> float:
    """1 / (1 + ln(||x1 - x2|| + 1 + eps)); 1 at zero distance, decays toward 0."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    dist = np.sqrt(np.sum((x1 - x2) ** 2))
    return float(1.0 / (1.0 + np.log(dist + 1.0 + eps)))


def cosine_resemblance(x1, x2) -> float:
    """Cosine of the angle between x1 and x2, in [-1, 1]."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    n1 = np.sqrt(np.sum(x1 * x1))
    n2 = np.sqrt(np.sum(x2 * x2))
    if n1 == 0.0 or n2 == 0.0:
        raise ValueError("cosine resemblance is undefined for zero-norm input")
    return float(np.dot(x1, x2) / (n1 * n2))


def rbf_resemblance(x1, x2, gamma: float) -> float:
    """exp(-gamma * ||x1 - x2||^2), in (0, 1]."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    return float(np.exp(-gamma * np.sum((x1 - x2) ** 2)))


def sigmoid_resemblance(x1, x2, gamma: float, coef0: float = 0.0) -> float:
    """tanh(gamma * <x1, x2> + coef0), in (-1, 1)."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x1.shape} vs {x2.shape}")
    return float(np.tanh(gamma * np.dot(x1, x2) + coef0))


def score_pair(cfg: ResemblanceConfig, x1, x2) -> float:
    """Evaluate the configured resemblance for a single pair."""
    if cfg.kind == "log":
        return log_resemblance(x1, x2, cfg.eps)
    if cfg.kind == "cosine":
        return cosine_resemblance(x1, x2)
    if cfg.kind == "rbf":
        if cfg.gamma is None:
            raise ValueError("gamma is unresolved; call ResemblanceConfig.resolved first")
        return rbf_resemblance(x1, x2, cfg.gamma)
    if cfg.gamma is None:
        raise ValueError("gamma is unresolved; call ResemblanceConfig.resolved first")
    return sigmoid_resemblance(x1, x2, cfg.gamma, cfg.coef0)


def edge_scores(
    sources: np.ndarray,
    targets: np.ndarray,
    indices: np.ndarray,
    distances: np.ndarray,
    cfg: ResemblanceConfig,
) -> np.ndarray:
    """Raw resemblance for every edge (i, indices[i, j]) of a neighbor pattern.

    ``sources`` holds the row points, ``targets`` the pool the indices refer
    to (the same array for a within-dataset graph), and ``distances`` the
    matching Euclidean distances. Returns an array shaped like ``indices``.
    """
    if cfg.kind == "log":
        return 1.0 / (1.0 + np.log(distances + 1.0 + cfg.eps))
    if cfg.kind == "rbf":
        if cfg.gamma is None:
            raise ValueError("gamma is unresolved; call ResemblanceConfig.resolved first")
        return np.exp(-cfg.gamma * distances**2)

    # inner-product kinds need the actual coordinates
    dots = np.sum(sources[:, None, :] * targets[indices], axis=2)
    if cfg.kind == "cosine":
        src_norms = np.sqrt(np.sum(sources**2, axis=1))
        tgt_norms = np.sqrt(np.sum(targets**2, axis=1))
        if (src_norms == 0.0).any() or (tgt_norms[np.unique(indices)] == 0.0).any():
            raise ValueError("cosine resemblance is undefined for zero-norm input")
        return dots / (src_norms[:, None] * tgt_norms[indices])
    if cfg.gamma is None:
        raise ValueError("gamma is unresolved; call ResemblanceConfig.resolved first")
    return np.tanh(cfg.gamma * dots + cfg.coef0)


def normalize_edges(scores: np.ndarray) -> tuple[np.ndarray, NormalizationBounds]:
    """Min-max rescale stored edge scores into [0, 1].

    Bounds come from the stored scores only; absent neighbor pairs do not
    contribute a zero. A degenerate range (all scores equal) maps every
    edge to 1.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ValueError("cannot normalize an empty edge set")
    if not np.isfinite(scores).all():
        raise ValueError("edge scores contain NaN or Inf")
    bounds = NormalizationBounds(float(scores.min()), float(scores.max()))
    if bounds.degenerate:
        return np.ones_like(scores), bounds
    return (scores - bounds.r_min) / bounds.span, bounds


__all__ = [
    "EdgeScore",
    "NormalizationBounds",
    "log_resemblance",
    "cosine_resemblance",
    "rbf_resemblance",
    "sigmoid_resemblance",
    "score_pair",
    "edge_scores",
    "normalize_edges",
]
