"""Topological skeleton extraction, homology-aware landmark Isomap, and
manifold tearing for dimensionality reduction."""

from .diagram_metrics import Matching, bottleneck, brute_force_match, wasserstein
from .embedding import (
    Direction,
    Embedding,
    classical_mds,
    isomap,
    isomap_from_graph,
    l_isomap,
    linear_project,
    projection_search,
    random_landmarks,
    sphere_directions,
)
from .geometry import (
    SHAPE_NAMES,
    DisconnectedGraphError,
    DistanceMatrix,
    NeighborhoodGraph,
    ParameterError,
    PointCloud,
    build_knn_graph,
    cloud_from_csv,
    cloud_to_csv,
    delay_embedding,
    generate_shape,
    geodesic_distances,
    load_cloud,
    maxmin_subsample,
    save_cloud,
)
from .persistence import (
    BettiSummary,
    PersistenceDiagram,
    brute_force_persistence,
    enclosing_radius,
    persistent_betti,
    vr_persistence,
)
from .quality import QualityReport, quality_report, residual_variance
from .skeleton import (
    CoverSpec,
    FilterValues,
    Skeleton,
    SkeletonNode,
    build_cover,
    choose_base_point,
    compute_filter,
    extract_landmarks,
    mapper_skeleton,
)
from .tearing import CutSpec, TearResult, evaluate_tear, rank_cuts, tear_graph

__version__ = "0.1.0"

__all__ = [
    "BettiSummary",
    "CoverSpec",
    "CutSpec",
    "Direction",
    "DisconnectedGraphError",
    "DistanceMatrix",
    "Embedding",
    "FilterValues",
    "Matching",
    "NeighborhoodGraph",
    "ParameterError",
    "PersistenceDiagram",
    "PointCloud",
    "QualityReport",
    "SHAPE_NAMES",
    "Skeleton",
    "SkeletonNode",
    "TearResult",
    "bottleneck",
    "brute_force_match",
    "brute_force_persistence",
    "build_cover",
    "build_knn_graph",
    "choose_base_point",
    "classical_mds",
    "cloud_from_csv",
    "cloud_to_csv",
    "compute_filter",
    "delay_embedding",
    "enclosing_radius",
    "evaluate_tear",
    "extract_landmarks",
    "generate_shape",
    "geodesic_distances",
    "isomap",
    "isomap_from_graph",
    "l_isomap",
    "linear_project",
    "load_cloud",
    "mapper_skeleton",
    "maxmin_subsample",
    "persistent_betti",
    "projection_search",
    "quality_report",
    "random_landmarks",
    "rank_cuts",
    "residual_variance",
    "save_cloud",
    "sphere_directions",
    "tear_graph",
    "vr_persistence",
    "wasserstein",
]
