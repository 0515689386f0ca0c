"""Family-resemblance clustering.

Clusters are connected components of a thresholded kNN resemblance graph:
points chained through strong pairwise resemblances form one family, with
no prior cluster count and no shape assumptions. The threshold can be
fixed or selected automatically, tiny families can be marked as outliers,
and fitted models assign labels to unseen points.
"""

from .auto_threshold import (
    ThresholdDiagnostics,
    select_threshold,
    separation_score,
    size_score,
)
from .core import (
    DEFAULT_EPS,
    OUTLIER_LABEL,
    Dataset,
    Labels,
    ResemblanceConfig,
    euclidean_distance,
)
from .datasets import (
    GeneratorSpec,
    SplitMix64,
    generate,
    read_labels_csv,
    read_points_csv,
    write_labels_csv,
    write_points_csv,
)
from .evaluation import ClusterSummary, adjusted_rand_index, summarize
from .family_graph import (
    Adjacency,
    OutlierPolicy,
    connected_components,
    connected_components_union_find,
    find_families,
    mark_outliers,
    threshold_adjacency,
)
from .model_io import ModelFormatError, load_model, save_model
from .neighbors import (
    NeighborLists,
    SparseResemblance,
    build_resemblance_matrix,
    knn_brute,
    knn_graph,
    knn_kdtree,
    query_neighbors,
)
from .out_of_sample import ModelState, predict, resemblance_scores
from .pipeline import FitResult, fit
from .resemblance import (
    EdgeScore,
    NormalizationBounds,
    cosine_resemblance,
    log_resemblance,
    normalize_edges,
    rbf_resemblance,
    sigmoid_resemblance,
)

__version__ = "0.1.0"

__all__ = [
    "Adjacency",
    "ClusterSummary",
    "DEFAULT_EPS",
    "Dataset",
    "EdgeScore",
    "FitResult",
    "GeneratorSpec",
    "Labels",
    "ModelFormatError",
    "ModelState",
    "NeighborLists",
    "NormalizationBounds",
    "OUTLIER_LABEL",
    "OutlierPolicy",
    "ResemblanceConfig",
    "SparseResemblance",
    "SplitMix64",
    "ThresholdDiagnostics",
    "adjusted_rand_index",
    "build_resemblance_matrix",
    "connected_components",
    "connected_components_union_find",
    "cosine_resemblance",
    "euclidean_distance",
    "find_families",
    "fit",
    "generate",
    "knn_brute",
    "knn_graph",
    "knn_kdtree",
    "load_model",
    "log_resemblance",
    "mark_outliers",
    "normalize_edges",
    "predict",
    "query_neighbors",
    "rbf_resemblance",
    "read_labels_csv",
    "read_points_csv",
    "save_model",
    "select_threshold",
    "separation_score",
    "sigmoid_resemblance",
    "size_score",
    "summarize",
    "resemblance_scores",
    "threshold_adjacency",
    "write_labels_csv",
    "write_points_csv",
]
