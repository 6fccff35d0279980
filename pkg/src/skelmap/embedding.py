"""Classical MDS, Isomap, landmark MDS / L-Isomap, and linear projections.

L-Isomap embeds a landmark subset with classical MDS on their geodesic
distance block and places every other point by distance triangulation
against the embedded landmarks (the de Silva / Tenenbaum landmark-MDS
formula), optionally followed by a PCA re-orientation of all coordinates.

Linear projection support samples directions on a sphere and ranks the
resulting 2-d projections by persistence-diagram distortion against the
input cloud.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from . import diagram_metrics, persistence
from .geometry import (
    DisconnectedGraphError,
    DistanceMatrix,
    NeighborhoodGraph,
    ParameterError,
    PointCloud,
    build_knn_graph,
    geodesic_distances,
    maxmin_subsample,
)


def max_workers() -> int:
    """Parallelism cap; honors the SKELMAP_THREADS environment variable."""
    env = os.environ.get("SKELMAP_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


@dataclass(frozen=True)
class Embedding:
    """N x d coordinates with provenance."""

    coords: np.ndarray
    method: str
    landmarks: tuple | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64)
        if c.ndim != 2:
            raise ParameterError("coords must be 2-d")
        if not np.all(np.isfinite(c)):
            raise ParameterError("embedding coordinates must be finite")
        object.__setattr__(self, "coords", c)
        if self.landmarks is not None:
            lm = tuple(int(i) for i in self.landmarks)
            if len(set(lm)) != len(lm):
                raise ParameterError("landmark indices must be distinct")
            if lm and (min(lm) < 0 or max(lm) >= c.shape[0]):
                raise ParameterError("landmark index out of range")
            object.__setattr__(self, "landmarks", lm)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def as_cloud(self) -> PointCloud:
        return PointCloud(points=self.coords)

    def euclidean_distances(self, indices=None) -> DistanceMatrix:
        return self.as_cloud().euclidean_distances(indices)

    def sidecar_json(self) -> str:
        meta = {
            "method": self.method,
            "d": self.d,
            "n": self.n,
            "landmarks": list(self.landmarks) if self.landmarks is not None else None,
            "params": _jsonable(self.params),
        }
        return json.dumps(meta, sort_keys=True, indent=2)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj


@dataclass(frozen=True)
class Direction:
    """Unit projection direction plus the 2-d basis of its orthocomplement."""

    vector: np.ndarray
    basis: np.ndarray  # (2, D) orthonormal, orthogonal to vector

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=np.float64).reshape(-1)
        b = np.asarray(self.basis, dtype=np.float64).reshape(2, -1)
        object.__setattr__(self, "vector", v)
        object.__setattr__(self, "basis", b)


# ---------------------------------------------------------------------------
# Classical MDS and Isomap
# ---------------------------------------------------------------------------

def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # reproducible sign convention: largest-magnitude entry of each column > 0
    out = vectors.copy()
    for c in range(out.shape[1]):
        col = out[:, c]
        pivot = int(np.argmax(np.abs(col)))
        if col[pivot] < 0:
            out[:, c] = -col
    return out


def _double_center(d2: np.ndarray) -> np.ndarray:
    row_mean = d2.mean(axis=1, keepdims=True)
    col_mean = d2.mean(axis=0, keepdims=True)
    return -0.5 * (d2 - row_mean - col_mean + d2.mean())


def _mds_coords(values: np.ndarray, d: int):
    n = values.shape[0]
    b = _double_center(values**2)
    b = 0.5 * (b + b.T)
    lo = max(0, n - d)
    eigvals, eigvecs = eigh(b, subset_by_index=(lo, n - 1))
    order = np.argsort(eigvals)[::-1]  # descending
    eigvals = eigvals[order]
    eigvecs = _fix_signs(eigvecs[:, order])
    clamped = np.any(eigvals < 0)
    coords = eigvecs * np.sqrt(np.maximum(eigvals, 0.0))
    all_eigvals = np.linalg.eigvalsh(b)
    neg_mass = float(np.sum(np.abs(all_eigvals[all_eigvals < 0])) / max(np.sum(np.abs(all_eigvals)), 1e-300))
    return coords, eigvals, bool(clamped), neg_mass


def classical_mds(dist: DistanceMatrix, d: int) -> Embedding:
    """Classical (Torgerson) MDS of a square distance matrix."""
    values = dist.require_reachable()
    if not dist.is_square:
        raise ParameterError("classical_mds needs a square matrix")
    n = values.shape[0]
    if d >= n:
        raise ParameterError("need d < n, got d=%d, n=%d" % (d, n))
    if d < 1:
        raise ParameterError("d must be >= 1")
    coords, eigvals, clamped, neg_mass = _mds_coords(values, d)
    coords = coords - coords.mean(axis=0)
    return Embedding(
        coords=coords,
        method="mds",
        params={
            "d": d,
            "eigenvalues": eigvals.tolist(),
            "negative_eigenvalue_clamped": clamped,
            "negative_eigenvalue_mass": neg_mass,
        },
    )


def isomap(cloud: PointCloud, k: int, d: int) -> Embedding:
    """Isomap: classical MDS of the full kNN-graph geodesic distance matrix."""
    graph = build_knn_graph(cloud, k)
    return isomap_from_graph(graph, d, k=k)


def isomap_from_graph(graph: NeighborhoodGraph, d: int, k=None) -> Embedding:
    if not graph.is_connected:
        raise DisconnectedGraphError(graph.component_sizes())
    geo = geodesic_distances(graph)
    emb = classical_mds(geo, d)
    params = dict(emb.params)
    params["k"] = k if k is not None else graph.k
    return Embedding(coords=emb.coords, method="isomap", params=params)


# ---------------------------------------------------------------------------
# Landmark selection and L-Isomap
# ---------------------------------------------------------------------------

def random_landmarks(n_points: int, n, seed: int = 0):
    """Uniform landmark sample without replacement; "auto" = ceil(sqrt(N))."""
    if n == "auto":
        n = math.ceil(math.sqrt(n_points))
    n = int(n)
    if not 1 <= n <= n_points:
        raise ParameterError("need 1 <= n <= N, got n=%d, N=%d" % (n, n_points))
    rng = np.random.default_rng(seed)
    return sorted(int(i) for i in rng.choice(n_points, size=n, replace=False))


def l_isomap(
    cloud: PointCloud,
    landmarks,
    k: int,
    d: int,
    pca_normalize: bool = True,
    method: str = "l-isomap-random",
) -> Embedding:
    """Landmark Isomap: landmark MDS plus triangulation of the other points."""
    lm = [int(i) for i in landmarks]
    if len(set(lm)) != len(lm):
        raise ParameterError("landmarks must be distinct")
    if len(lm) < d + 1:
        raise ParameterError(
            "need at least d+1 landmarks, got %d for d=%d" % (len(lm), d)
        )
    if min(lm) < 0 or max(lm) >= cloud.n:
        raise ParameterError("landmark index out of range")
    graph = build_knn_graph(cloud, k)
    if not graph.is_connected:
        raise DisconnectedGraphError(graph.component_sizes())
    geo = geodesic_distances(graph, sources=lm)  # n_landmarks x N
    dist_ln = geo.require_reachable()
    dist_ll = dist_ln[:, lm]
    dist_ll = 0.5 * (dist_ll + dist_ll.T)

    coords_l, eigvals, clamped, neg_mass = _mds_coords(dist_ll, d)
    coords_l = coords_l - coords_l.mean(axis=0)

    # triangulation: y_a = 1/2 * L_pinv (delta_mean - delta_a), with L_pinv
    # rows eigvec_i^T / sqrt(lambda_i) of the landmark embedding
    with np.errstate(divide="ignore"):
        inv_root = np.where(eigvals > 1e-12, 1.0 / np.sqrt(np.maximum(eigvals, 1e-300)), 0.0)
    l_pinv = (coords_l * inv_root**2).T  # d x n_landmarks; eigvec/sqrt(lambda)
    delta = dist_ln**2  # n_landmarks x N
    delta_mean = (dist_ll**2).mean(axis=1)
    coords = 0.5 * (l_pinv @ (delta_mean[:, None] - delta)).T  # N x d

    # landmarks keep their MDS coordinates exactly
    coords[lm] = coords_l

    if pca_normalize:
        centered = coords - coords.mean(axis=0)
        cov = centered.T @ centered
        _, vecs = np.linalg.eigh(cov)
        vecs = _fix_signs(vecs[:, ::-1])
        coords = centered @ vecs
    else:
        coords = coords - coords.mean(axis=0)

    return Embedding(
        coords=coords,
        method=method,
        landmarks=tuple(lm),
        params={
            "k": k,
            "d": d,
            "pca_normalize": pca_normalize,
            "negative_eigenvalue_clamped": clamped,
            "negative_eigenvalue_mass": neg_mass,
        },
    )


# ---------------------------------------------------------------------------
# Linear projections
# ---------------------------------------------------------------------------

_REF_AXES = np.eye(3)


def sphere_directions(m: int, ambient_dim: int = 3, seed: int = 0):
    """m projection directions: Fibonacci lattice on S^2, seeded uniform
    sampling on the sphere for higher ambient dimensions."""
    if m < 1:
        raise ParameterError("m must be >= 1")
    if ambient_dim < 3:
        raise ParameterError("need ambient dimension >= 3")
    if ambient_dim == 3:
        idx = np.arange(m)
        golden = (1 + math.sqrt(5)) / 2
        z = 1 - (2 * idx + 1) / m
        r = np.sqrt(np.maximum(0.0, 1 - z * z))
        theta = 2 * math.pi * idx / golden
        vectors = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
    else:
        rng = np.random.default_rng(seed)
        vectors = rng.normal(size=(m, ambient_dim))
        vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    return [Direction(vector=v, basis=_orthobasis(v)) for v in vectors]


def _orthobasis(v: np.ndarray) -> np.ndarray:
    """Two orthonormal vectors spanning v's orthocomplement, deterministically
    Gram-Schmidt'ed against fixed reference axes."""
    dim = v.shape[0]
    basis = []
    for axis in np.eye(dim):
        u = axis - (axis @ v) * v
        for b in basis:
            u = u - (u @ b) * b
        norm = np.linalg.norm(u)
        if norm > 1e-8:
            basis.append(u / norm)
        if len(basis) == 2:
            break
    return np.stack(basis)


def linear_project(cloud: PointCloud, direction: Direction) -> Embedding:
    """Project onto the 2-d orthocomplement of the direction."""
    if cloud.dim < 3:
        raise ParameterError("linear projection needs ambient dimension >= 3")
    coords = cloud.points @ direction.basis.T
    return Embedding(
        coords=coords,
        method="linear-projection",
        params={"direction": direction.vector.tolist()},
    )


def projection_search(
    cloud: PointCloud,
    m: int,
    rank_metric: str = "wd1",
    subsample_size: int = 256,
    seed: int = 0,
):
    """Rank m sphere-sampled directions by diagram distortion of their
    projections against the input cloud (ascending score, index tiebreak).

    Diagrams on both sides are computed on the same maxmin subsample.
    Returns a list of (Direction, score) with wd1_then_wd0 scores as tuples.
    """
    if rank_metric not in ("wd1", "wd1_then_wd0", "bottleneck"):
        raise ParameterError("unknown rank_metric %r" % rank_metric)
    directions = sphere_directions(m, ambient_dim=cloud.dim, seed=seed)
    if cloud.n > subsample_size:
        idx = maxmin_subsample(cloud, subsample_size, seed=seed)
    else:
        idx = list(range(cloud.n))
    base = persistence.vr_persistence(cloud.euclidean_distances(idx), max_dim=1)

    def score_one(direction):
        emb = linear_project(cloud, direction)
        dgs = persistence.vr_persistence(emb.euclidean_distances(idx), max_dim=1)
        if rank_metric == "bottleneck":
            return diagram_metrics.bottleneck(base[1], dgs[1], ignore_scale_cap=True)[0]
        wd1 = diagram_metrics.wasserstein(base[1], dgs[1], 2.0, ignore_scale_cap=True)[0]
        if rank_metric == "wd1":
            return wd1
        wd0 = diagram_metrics.wasserstein(base[0], dgs[0], 2.0, ignore_scale_cap=True)[0]
        return (wd1, wd0)

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        scores = list(pool.map(score_one, directions))
    order = sorted(range(m), key=lambda i: (scores[i], i))
    return [(directions[i], scores[i]) for i in order]
