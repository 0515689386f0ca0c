"""Scatter plots of labeled point sets, rendered to files with matplotlib."""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import OUTLIER_LABEL, Dataset, Labels

# stable ids inside SVG output so renders are reproducible byte for byte
matplotlib.rcParams["svg.hashsalt"] = "famcluster"

_OUTLIER_STYLE = dict(c="0.45", marker="x", s=24, linewidths=1.0)


def scatter_labels(data: Dataset, labels: Labels, path, title: str | None = None) -> None:
    """Render one marker per point, colored by cluster; outliers as gray crosses.

    Plots the first two coordinates (a zero y-axis for 1-D data). SVG
    output omits the creation date so identical inputs give identical
    files.
    """
    if len(labels) != data.n:
        raise ValueError(f"labels length {len(labels)} does not match n = {data.n}")
    pts = data.points
    x = pts[:, 0]
    y = pts[:, 1] if data.d > 1 else np.zeros(data.n)

    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    values = labels.values
    cmap = matplotlib.colormaps["tab20"]
    for rank, cluster in enumerate(sorted(int(c) for c in np.unique(values[values >= 0]))):
        mask = values == cluster
        ax.scatter(x[mask], y[mask], s=14, color=cmap(rank % 20), label=f"cluster {cluster}")
    mask = values == OUTLIER_LABEL
    if mask.any():
        ax.scatter(x[mask], y[mask], label="outliers", **_OUTLIER_STYLE)

    ax.set_aspect("equal", adjustable="datalim")
    if title:
        ax.set_title(title)
    if 0 < len(ax.get_legend_handles_labels()[0]) <= 12:
        ax.legend(loc="best", fontsize=8)
    metadata = {"Date": None} if str(path).lower().endswith(".svg") else None
    fig.savefig(path, metadata=metadata, bbox_inches="tight")
    plt.close(fig)
