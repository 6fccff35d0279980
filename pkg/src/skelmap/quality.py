"""Distance-based and homology-based quality assessment of embeddings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import diagram_metrics, persistence
from .embedding import Embedding
from .geometry import (
    DistanceMatrix,
    ParameterError,
    PointCloud,
    build_knn_graph,
    geodesic_distances,
    maxmin_subsample,
)

# quality pipelines subsample clouds beyond this size before computing
# persistence; full Rips on thousands of points is out of budget
SUBSAMPLE_LIMIT = 1024
DEFAULT_SUBSAMPLE = 256

ISOMAP_METHODS = ("isomap", "l-isomap-random", "l-isomap-homology")


@dataclass(frozen=True)
class QualityReport:
    rv: float
    wd0: float
    wd1: float
    pb1_before: int
    pb1_after: int
    subsample_size: int
    thresholds: dict = field(default_factory=dict)
    flags: tuple = ()
    conventions: dict = field(default_factory=dict)

    def to_json(self) -> str:
        obj = {
            "rv": self.rv,
            "wd0": self.wd0,
            "wd1": self.wd1,
            "pb1_before": self.pb1_before,
            "pb1_after": self.pb1_after,
            "subsample_size": self.subsample_size,
            "thresholds": self.thresholds,
            "flags": list(self.flags),
            "conventions": self.conventions,
        }
        return json.dumps(obj, sort_keys=True, indent=2)

    def csv_row(self) -> str:
        return "%.6g,%.6g,%.6g,%d,%d,%d" % (
            self.rv,
            self.wd0,
            self.wd1,
            self.pb1_before,
            self.pb1_after,
            self.subsample_size,
        )

    CSV_HEADER = "rv,wd0,wd1,pb1_before,pb1_after,subsample_size"


def pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc @ xc) * (yc @ yc))
    if denom == 0:
        raise ParameterError("correlation undefined for constant distance vectors")
    return float((xc @ yc) / denom)


def residual_variance(dx: DistanceMatrix, dy: DistanceMatrix) -> float:
    """RV = 1 - R^2 over the vectorized strict upper triangles."""
    a, b = dx.values, dy.values
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ParameterError("residual_variance needs same-shape square matrices")
    iu = np.triu_indices(a.shape[0], 1)
    va, vb = a[iu], b[iu]
    if va.size < 3:
        raise ParameterError("need at least 3 off-diagonal entries")
    r = pearson(va, vb)
    return 1.0 - r * r


def quality_report(
    cloud: PointCloud,
    embedding: Embedding,
    subsample_size: int = DEFAULT_SUBSAMPLE,
    thresholds=None,
    seed: int = 0,
) -> QualityReport:
    """RV plus Wasserstein/persistent-Betti comparison of cloud vs embedding.

    Persistence runs on a shared maxmin subsample of both sides (identical
    indices) so the diagram distances measure embedding distortion rather
    than sampling noise.  RV follows the Isomap convention (geodesic input
    distances) for isomap-family embeddings and Euclidean otherwise; the
    Wasserstein side always compares Euclidean matrices.
    """
    if embedding.n != cloud.n:
        raise ParameterError("embedding and cloud row counts differ")

    # RV
    if embedding.method in ISOMAP_METHODS:
        k = int(embedding.params.get("k", 8))
        graph = build_knn_graph(cloud, k)
        dx_rv = geodesic_distances(graph)
        dx_rv.require_reachable()
        rv_convention = "geodesic-vs-euclidean"
    else:
        dx_rv = cloud.euclidean_distances()
        rv_convention = "euclidean-vs-euclidean"
    rv = residual_variance(dx_rv, embedding.euclidean_distances())

    # persistence on a shared subsample
    if cloud.n > min(subsample_size, SUBSAMPLE_LIMIT):
        idx = maxmin_subsample(cloud, subsample_size, seed=seed)
    else:
        idx = list(range(cloud.n))
    before = persistence.vr_persistence(cloud.euclidean_distances(idx), max_dim=1)
    after = persistence.vr_persistence(embedding.euclidean_distances(idx), max_dim=1)

    wd0 = diagram_metrics.wasserstein(before[0], after[0], 2.0, ignore_scale_cap=True)[0]
    wd1 = diagram_metrics.wasserstein(before[1], after[1], 2.0, ignore_scale_cap=True)[0]

    thr_before = thresholds.get("before") if thresholds else None
    thr_after = thresholds.get("after") if thresholds else None
    pb_before = persistence.persistent_betti(before[1], thr_before)
    pb_after = persistence.persistent_betti(after[1], thr_after)

    flags = []
    if pb_before.ambiguous:
        flags.append("pb1_before_threshold_ambiguous")
    if pb_after.ambiguous:
        flags.append("pb1_after_threshold_ambiguous")

    return QualityReport(
        rv=float(rv),
        wd0=float(wd0),
        wd1=float(wd1),
        pb1_before=pb_before.count,
        pb1_after=pb_after.count,
        subsample_size=len(idx),
        thresholds={
            "pb1_before": pb_before.threshold,
            "pb1_after": pb_after.threshold,
        },
        flags=tuple(flags),
        conventions={"rv": rv_convention, "wd": "euclidean-vs-euclidean", "wd_p": 2},
    )
