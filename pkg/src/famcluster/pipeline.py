"""End-to-end training: kNN graph -> resemblance -> threshold -> families."""

from __future__ import annotations

from dataclasses import dataclass

from .auto_threshold import (
    DEFAULT_ALPHA,
    DEFAULT_F_MIN,
    DEFAULT_GRID_STEP,
    ThresholdDiagnostics,
    select_threshold,
)
from .core import DEFAULT_EPS, Dataset, Labels, ResemblanceConfig
from .family_graph import OutlierPolicy, find_families
from .neighbors import NeighborLists, SparseResemblance, build_resemblance_matrix, knn_graph

DEFAULT_K = 10

#: Tiny families are marked as outliers by default (ratio rule); pass
#: OutlierPolicy("none") to keep every cluster.
DEFAULT_OUTLIERS = OutlierPolicy("ratio")


@dataclass(frozen=True)
class FitResult:
    """Training output: labels plus the state the test phase needs."""

    labels: Labels
    model: "ModelState"
    resemblance: SparseResemblance
    neighbors: NeighborLists
    diagnostics: ThresholdDiagnostics | None

    @property
    def tau(self) -> float:
        return self.model.tau


def fit(
    data: Dataset,
    config: ResemblanceConfig = ResemblanceConfig("log"),
    *,
    k: int = DEFAULT_K,
    tau: float | None = None,
    grid_step: float = DEFAULT_GRID_STEP,
    outliers: OutlierPolicy = DEFAULT_OUTLIERS,
    f_min: float = DEFAULT_F_MIN,
    alpha: float = DEFAULT_ALPHA,
    score_eps: float = DEFAULT_EPS,
    backend: str = "kdtree",
) -> FitResult:
    """Cluster ``data`` into families of chained resemblance.

    With ``tau=None`` the threshold is selected automatically by grid
    search; otherwise the given value is used as-is.
    """
    from .out_of_sample import ModelState

    cfg = config.resolved(data.d)
    nbrs = knn_graph(data, k, backend)
    resemblance = build_resemblance_matrix(data, nbrs, cfg)

    diagnostics = None
    if tau is None:
        tau, diagnostics = select_threshold(
            resemblance,
            data,
            nbrs,
            policy=outliers,
            grid_step=grid_step,
            f_min=f_min,
            alpha=alpha,
            eps=score_eps,
        )
    elif not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must be in [0, 1], got {tau}")

    labels = find_families(resemblance, tau, outliers)
    model = ModelState(data, labels, cfg, k, float(tau), resemblance.bounds)
    return FitResult(labels, model, resemblance, nbrs, diagnostics)
