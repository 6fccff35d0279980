"""Mapper skeletons: filter functions, interval covers, pullback clustering.

The skeleton is the 1-skeleton of the nerve of the refined pullback cover:
nodes are DBSCAN clusters of the points falling in each filter interval,
edges join clusters of adjacent intervals that share points.  Cluster
centroids (the member nearest the member mean) double as landmarks for
L-Isomap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import (
    DisconnectedGraphError,
    NeighborhoodGraph,
    ParameterError,
    PointCloud,
    geodesic_distances,
)


@dataclass(frozen=True)
class FilterValues:
    """Scalar filter per point; DTB = geodesic distance to a base point."""

    values: np.ndarray
    name: str  # "dtb" | "custom"
    base_point: int | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ParameterError("filter values must be finite")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class CoverSpec:
    """Ordered overlapping intervals covering the filter range."""

    intervals: tuple  # of (a, b)
    n: int
    p: float

    def membership(self, values: np.ndarray):
        """Per-interval boolean masks; half-open except the last interval."""
        masks = []
        last = len(self.intervals) - 1
        for idx, (a, b) in enumerate(self.intervals):
            if idx == last:
                masks.append((values >= a) & (values <= b))
            else:
                masks.append((values >= a) & (values < b))
        return masks


@dataclass(frozen=True)
class SkeletonNode:
    id: int
    members: tuple  # point indices
    centroid: int
    interval: int


@dataclass(frozen=True)
class Skeleton:
    nodes: tuple  # of SkeletonNode
    edges: tuple  # of (u, v, shared_count)
    filter: FilterValues
    cover: CoverSpec

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def cycle_rank(self) -> int:
        """|E| - |V| + #components of the skeleton graph (its first Betti
        number viewed as a graph)."""
        parent = list(range(self.node_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        components = len({find(i) for i in range(self.node_count)})
        return self.edge_count - self.node_count + components

    def centroid_of(self, node_id: int) -> int:
        return self.nodes[node_id].centroid

    def to_json(self) -> str:
        obj = {
            "nodes": [
                {
                    "id": nd.id,
                    "members": list(nd.members),
                    "centroid": nd.centroid,
                    "interval": nd.interval,
                }
                for nd in self.nodes
            ],
            "edges": [[u, v, s] for u, v, s in self.edges],
            "filter": {"kind": self.filter.name, "base": self.filter.base_point},
            "cover": {"n": self.cover.n, "p": self.cover.p},
        }
        return json.dumps(obj, sort_keys=True, indent=2)

    @staticmethod
    def from_json(text: str, filter_values=None) -> "Skeleton":
        obj = json.loads(text)
        nodes = tuple(
            SkeletonNode(
                id=nd["id"],
                members=tuple(nd["members"]),
                centroid=nd["centroid"],
                interval=nd["interval"],
            )
            for nd in obj["nodes"]
        )
        n_points = max(max(nd.members) for nd in nodes) + 1
        fv = FilterValues(
            values=filter_values if filter_values is not None else np.zeros(n_points),
            name=obj["filter"]["kind"],
            base_point=obj["filter"]["base"],
        )
        cover = CoverSpec(intervals=(), n=obj["cover"]["n"], p=obj["cover"]["p"])
        return Skeleton(
            nodes=nodes,
            edges=tuple((u, v, s) for u, v, s in obj["edges"]),
            filter=fv,
            cover=cover,
        )


# ---------------------------------------------------------------------------
# Filter functions
# ---------------------------------------------------------------------------

def choose_base_point(cloud: PointCloud, graph: NeighborhoodGraph, strategy) -> int:
    """extreme: two-pass farthest point from the barycenter-nearest point;
    barycenter: point nearest the coordinate mean; explicit: given index."""
    if isinstance(strategy, (int, np.integer)):
        base = int(strategy)
        if not 0 <= base < cloud.n:
            raise ParameterError("base point index out of range")
        return base
    mean = cloud.points.mean(axis=0)
    nearest_mean = int(np.argmin(np.linalg.norm(cloud.points - mean, axis=1)))
    if strategy == "barycenter":
        return nearest_mean
    if strategy == "extreme":
        geo = geodesic_distances(graph, sources=[nearest_mean])
        row = geo.require_reachable()[0]
        return int(np.argmax(row))  # farthest from the central point
    raise ParameterError("unknown base strategy %r" % (strategy,))


def compute_filter(
    cloud: PointCloud,
    graph: NeighborhoodGraph,
    kind: str = "dtb",
    base_strategy="extreme",
) -> FilterValues:
    """Distance-to-base filter: single-source geodesic distances."""
    if kind != "dtb":
        raise ParameterError("unknown filter kind %r" % kind)
    if not graph.is_connected:
        raise DisconnectedGraphError(graph.component_sizes())
    base = choose_base_point(cloud, graph, base_strategy)
    geo = geodesic_distances(graph, sources=[base])
    return FilterValues(values=geo.require_reachable()[0], name="dtb", base_point=base)


def build_cover(f: FilterValues, n: int, p: float) -> CoverSpec:
    """n uniform-length intervals with overlap fraction p over [min f, max f]."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if not 0 <= p < 1:
        raise ParameterError("p must be in [0, 1)")
    lo = float(f.values.min())
    hi = float(f.values.max())
    if hi == lo or n == 1:
        return CoverSpec(intervals=((lo, hi),) if hi > lo else ((lo, lo),), n=1, p=p)
    length = (hi - lo) / (n - (n - 1) * p)
    step = length * (1 - p)
    intervals = tuple((lo + i * step, lo + i * step + length) for i in range(n))
    return CoverSpec(intervals=intervals, n=n, p=p)


# ---------------------------------------------------------------------------
# Deterministic DBSCAN
# ---------------------------------------------------------------------------

def dbscan_labels(points: np.ndarray, eps: float, minpts: int):
    """DBSCAN with points expanded in index order (reproducible borders).

    Returns labels; -1 marks noise.  Neighborhoods use the ambient Euclidean
    metric and include the point itself.
    """
    m = points.shape[0]
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    neighbors = [np.nonzero(dist[i] <= eps)[0] for i in range(m)]
    core = np.array([len(nb) >= minpts for nb in neighbors])
    labels = np.full(m, -1, dtype=np.int64)
    cluster = 0
    for i in range(m):
        if labels[i] != -1 or not core[i]:
            continue
        labels[i] = cluster
        frontier = [i]
        while frontier:
            q = frontier.pop(0)
            for nb in neighbors[q]:
                if labels[nb] == -1:
                    labels[nb] = cluster
                    if core[nb]:
                        frontier.append(nb)
        cluster += 1
    return labels


def _auto_eps(points: np.ndarray, minpts: int) -> float:
    """Mean distance to the minpts-th nearest neighbor among the given points."""
    m = points.shape[0]
    if m < 2:
        return 1.0
    diff = points[:, None, :] - points[None, :, :]
    dist = np.sqrt(np.sum(diff * diff, axis=2))
    kth = min(minpts, m - 1)
    sorted_d = np.sort(dist, axis=1)
    return float(sorted_d[:, kth].mean())


# ---------------------------------------------------------------------------
# Mapper skeleton
# ---------------------------------------------------------------------------

def mapper_skeleton(
    cloud: PointCloud,
    graph: NeighborhoodGraph,
    f: FilterValues,
    cover: CoverSpec,
    dbscan_eps="auto",
    dbscan_minpts: int = 5,
) -> Skeleton:
    """Pullback-cluster each cover interval and assemble the nerve.

    DBSCAN noise points become singleton nodes so every point keeps a node
    (and therefore a landmark path for L-Isomap triangulation).
    """
    if cloud.n == 0:
        raise ParameterError("empty point cloud")
    if dbscan_minpts < 1:
        raise ParameterError("minpts must be >= 1")
    nodes = []
    for interval_id, mask in enumerate(cover.membership(f.values)):
        member_idx = np.nonzero(mask)[0]
        if member_idx.size == 0:
            continue
        pts = cloud.points[member_idx]
        eps = _auto_eps(pts, dbscan_minpts) if dbscan_eps == "auto" else float(dbscan_eps)
        labels = dbscan_labels(pts, eps, dbscan_minpts)
        clusters = []
        for c in range(labels.max() + 1 if labels.size else 0):
            clusters.append(member_idx[labels == c])
        clusters.extend(member_idx[i : i + 1] for i in np.nonzero(labels == -1)[0])
        for members in clusters:
            local = cloud.points[members]
            mean = local.mean(axis=0)
            centroid = members[int(np.argmin(np.linalg.norm(local - mean, axis=1)))]
            nodes.append(
                SkeletonNode(
                    id=len(nodes),
                    members=tuple(int(i) for i in members),
                    centroid=int(centroid),
                    interval=interval_id,
                )
            )
    member_sets = [set(nd.members) for nd in nodes]
    edges = []
    for u in range(len(nodes)):
        for v in range(u + 1, len(nodes)):
            if abs(nodes[u].interval - nodes[v].interval) > 1:
                continue
            shared = len(member_sets[u] & member_sets[v])
            if shared:
                edges.append((u, v, shared))
    return Skeleton(nodes=tuple(nodes), edges=tuple(edges), filter=f, cover=cover)


def extract_landmarks(skeleton: Skeleton):
    """Deduplicated, ascending centroid indices of all skeleton nodes."""
    return sorted({nd.centroid for nd in skeleton.nodes})
