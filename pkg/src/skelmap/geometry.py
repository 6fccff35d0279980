"""Point clouds, neighborhood graphs, geodesic distances and synthetic shapes.

Everything downstream (persistence, embeddings, skeletons) consumes the
containers defined here.  Geodesic distances are graph shortest paths on a
symmetrized kNN graph; unreachable entries are carried as an explicit mask,
never as a magic number.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, dijkstra


class ParameterError(ValueError):
    """A precondition on user-supplied parameters was violated."""


class DisconnectedGraphError(RuntimeError):
    """An operation that requires a connected graph got a disconnected one."""

    def __init__(self, component_sizes):
        self.component_sizes = sorted(component_sizes, reverse=True)
        super().__init__(
            "graph is disconnected; component sizes %s" % self.component_sizes
        )


@dataclass(frozen=True)
class PointCloud:
    """N points in R^D, row per point."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ParameterError("points must be a 2-d array, got shape %s" % (pts.shape,))
        if pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ParameterError("need N >= 1 and D >= 1, got shape %s" % (pts.shape,))
        if not np.all(np.isfinite(pts)):
            raise ParameterError("point coordinates must be finite")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def euclidean_distances(self, indices=None) -> "DistanceMatrix":
        """Pairwise Euclidean distance matrix (optionally on a subset)."""
        pts = self.points if indices is None else self.points[np.asarray(indices)]
        diff = pts[:, None, :] - pts[None, :, :]
        values = np.sqrt(np.sum(diff * diff, axis=2))
        np.fill_diagonal(values, 0.0)
        values = np.maximum(values, values.T)  # enforce exact symmetry
        return DistanceMatrix(values=values, kind="euclidean")


@dataclass(frozen=True)
class NeighborhoodGraph:
    """Symmetrized kNN graph; edges stored once with i < j."""

    vertex_count: int
    edge_index: np.ndarray  # (E, 2) int, i < j
    edge_weight: np.ndarray  # (E,) float, > 0
    k: int

    def __post_init__(self):
        idx = np.asarray(self.edge_index, dtype=np.int64).reshape(-1, 2)
        w = np.asarray(self.edge_weight, dtype=np.float64).reshape(-1)
        if idx.shape[0] != w.shape[0]:
            raise ParameterError("edge index/weight length mismatch")
        object.__setattr__(self, "edge_index", idx)
        object.__setattr__(self, "edge_weight", w)

    @property
    def edge_count(self) -> int:
        return self.edge_index.shape[0]

    def edges(self):
        """Edges as (i, j, w) tuples."""
        return [
            (int(i), int(j), float(w))
            for (i, j), w in zip(self.edge_index, self.edge_weight)
        ]

    def to_sparse(self) -> csr_matrix:
        n = self.vertex_count
        i = self.edge_index[:, 0]
        j = self.edge_index[:, 1]
        data = np.concatenate([self.edge_weight, self.edge_weight])
        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    def component_labels(self) -> np.ndarray:
        _, labels = connected_components(self.to_sparse(), directed=False)
        return labels

    @property
    def is_connected(self) -> bool:
        n_comp, _ = connected_components(self.to_sparse(), directed=False)
        return n_comp == 1

    def component_sizes(self):
        labels = self.component_labels()
        return np.bincount(labels).tolist()

    def without_edges(self, removed: np.ndarray) -> "NeighborhoodGraph":
        """Copy with the given edge positions (row indices) removed."""
        keep = np.ones(self.edge_count, dtype=bool)
        keep[np.asarray(removed, dtype=np.int64)] = False
        return NeighborhoodGraph(
            vertex_count=self.vertex_count,
            edge_index=self.edge_index[keep],
            edge_weight=self.edge_weight[keep],
            k=self.k,
        )


@dataclass(frozen=True)
class DistanceMatrix:
    """m x n nonnegative distances; `unreachable` marks pairs with no path."""

    values: np.ndarray
    kind: str  # "euclidean" | "geodesic"
    unreachable: np.ndarray | None = None
    source_indices: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", v)
        if self.unreachable is not None:
            u = np.asarray(self.unreachable, dtype=bool)
            if u.shape != v.shape:
                raise ParameterError("unreachable mask shape mismatch")
            if not u.any():
                u = None
            object.__setattr__(self, "unreachable", u)

    @property
    def shape(self):
        return self.values.shape

    @property
    def is_square(self) -> bool:
        return self.values.shape[0] == self.values.shape[1]

    @property
    def has_unreachable(self) -> bool:
        return self.unreachable is not None

    def require_reachable(self) -> np.ndarray:
        if self.has_unreachable:
            raise DisconnectedGraphError(
                _component_sizes_from_mask(self.unreachable)
            )
        return self.values


def _component_sizes_from_mask(mask):
    # Rough component summary for error messages: count columns reachable
    # from row 0 versus not.
    reach = (~mask[0]).sum() if mask.shape[0] else 0
    return [int(reach), int(mask.shape[1] - reach)]


def build_knn_graph(cloud: PointCloud, k: int) -> NeighborhoodGraph:
    """Symmetrized k-nearest-neighbor graph with Euclidean edge weights.

    An edge (i, j) is present when i is among j's k nearest neighbors or
    vice versa.  Ties in the k-th distance are broken by lower point index.
    """
    n = cloud.n
    if not 1 <= k < n:
        raise ParameterError("need 1 <= k < N, got k=%d, N=%d" % (k, n))
    d = cloud.euclidean_distances().values
    pair_set = set()
    for i in range(n):
        row = d[i].copy()
        row[i] = np.inf
        # stable sort: equal distances keep index order -> lower index wins
        order = np.argsort(row, kind="stable")[:k]
        for j in order:
            a, b = (i, int(j)) if i < j else (int(j), i)
            pair_set.add((a, b))
    pairs = sorted(pair_set)
    idx = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    w = d[idx[:, 0], idx[:, 1]]
    return NeighborhoodGraph(vertex_count=n, edge_index=idx, edge_weight=w, k=k)


def geodesic_distances(graph: NeighborhoodGraph, sources=None) -> DistanceMatrix:
    """Shortest-path lengths from each source vertex to all vertices."""
    sp = graph.to_sparse()
    if sources is None:
        src = np.arange(graph.vertex_count)
    else:
        src = np.asarray(sources, dtype=np.int64)
        if src.size and (src.min() < 0 or src.max() >= graph.vertex_count):
            raise ParameterError("source index out of range")
    values = dijkstra(sp, directed=False, indices=src)
    mask = ~np.isfinite(values)
    return DistanceMatrix(
        values=values,
        kind="geodesic",
        unreachable=mask if mask.any() else None,
        source_indices=src,
    )


def maxmin_subsample(cloud: PointCloud, m: int, seed: int = 0, start=None):
    """Greedy farthest-point sample of m indices; deterministic per seed.

    The first index is drawn from the seeded RNG unless `start` is given;
    each subsequent index maximizes the distance to the chosen set, ties
    broken by lower index.
    """
    n = cloud.n
    if not 1 <= m <= n:
        raise ParameterError("need 1 <= m <= N, got m=%d, N=%d" % (m, n))
    if start is None:
        start = int(np.random.default_rng(seed).integers(n))
    chosen = [int(start)]
    min_d = np.linalg.norm(cloud.points - cloud.points[start], axis=1)
    for _ in range(m - 1):
        nxt = int(np.argmax(min_d))  # argmax returns first max -> lowest index
        chosen.append(nxt)
        min_d = np.minimum(
            min_d, np.linalg.norm(cloud.points - cloud.points[nxt], axis=1)
        )
    return chosen


def delay_embedding(signal, window: int, step: int = 1) -> PointCloud:
    """Sliding-window (delay) embedding of a scalar signal."""
    sig = np.asarray(signal, dtype=np.float64).reshape(-1)
    length = sig.shape[0]
    if window < 1 or window > length:
        raise ParameterError(
            "need 1 <= window <= len(signal), got window=%d, len=%d" % (window, length)
        )
    if step < 1:
        raise ParameterError("step must be >= 1")
    starts = np.arange(0, length - window + 1, step)
    pts = np.stack([sig[t : t + window] for t in starts])
    return PointCloud(points=pts)


# ---------------------------------------------------------------------------
# Synthetic shape generators
# ---------------------------------------------------------------------------

SHAPE_NAMES = (
    "circle",
    "torus",
    "swiss_roll",
    "swiss_roll_hole",
    "figure_eight_bended",
    "cylinder_holes",
    "s_surface_holes",
)


def generate_shape(shape: str, n: int, noise: float = 0.0, seed: int = 0, **params) -> PointCloud:
    """Sample n points from a named synthetic surface.

    Gaussian noise with std `noise` is added to the ideal surface samples.
    Shapes with carved holes use rejection sampling against analytic hole
    masks in parameter space.  Deterministic for a fixed seed.
    """
    if n <= 0:
        raise ParameterError("n must be positive")
    if shape not in SHAPE_NAMES:
        raise ParameterError(
            "unknown shape %r; supported: %s" % (shape, ", ".join(SHAPE_NAMES))
        )
    rng = np.random.default_rng(seed)
    pts = _SHAPES[shape](n, rng, params)
    if noise > 0:
        pts = pts + rng.normal(0.0, noise, size=pts.shape)
    return PointCloud(points=pts)


def _circle(n, rng, params):
    r = params.get("radius", 1.0)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def _torus(n, rng, params):
    major = params.get("major", 2.0)
    minor = params.get("minor", 1.0)
    u = rng.uniform(0.0, 2 * np.pi, n)
    v = rng.uniform(0.0, 2 * np.pi, n)
    x = (major + minor * np.cos(v)) * np.cos(u)
    y = (major + minor * np.cos(v)) * np.sin(u)
    z = minor * np.sin(v)
    return np.column_stack([x, y, z])


def _swiss_roll_params(n, rng, params):
    t0 = params.get("t_min", 1.5 * np.pi)
    t1 = params.get("t_max", 4.5 * np.pi)
    height = params.get("height", 21.0)
    t = rng.uniform(t0, t1, n)
    y = rng.uniform(0.0, height, n)
    return t, y, height, t0


def _roll_surface(t, y):
    return np.column_stack([t * np.cos(t), y, t * np.sin(t)])


def _swiss_roll(n, rng, params):
    t, y, _, _ = _swiss_roll_params(n, rng, params)
    return _roll_surface(t, y)


def _roll_arclength(t, t0):
    # arc length of (t cos t, t sin t): integral of sqrt(1 + u^2) du
    def s(u):
        return 0.5 * (u * np.sqrt(1 + u * u) + np.arcsinh(u))

    return s(t) - s(t0)


def _swiss_roll_hole(n, rng, params):
    # a shorter roll (three quarter turn) keeps the carved hole as the only
    # significant loop; a full winding would add a spiral-mouth loop
    params = {"t_max": 3.0 * np.pi, **params}
    hole_radius = params.get("hole_radius", 6.0)
    out_t = np.empty(0)
    out_y = np.empty(0)
    t0 = params.get("t_min", 1.5 * np.pi)
    t1 = params.get("t_max", 4.5 * np.pi)
    height = params.get("height", 21.0)
    s_total = _roll_arclength(np.array([t1]), t0)[0]
    cs = params.get("hole_center_s", 0.5 * s_total)
    cy = params.get("hole_center_y", 0.5 * height)
    while out_t.size < n:
        t, y, _, _ = _swiss_roll_params(2 * n, rng, params)
        s = _roll_arclength(t, t0)
        keep = (s - cs) ** 2 + (y - cy) ** 2 > hole_radius**2
        out_t = np.concatenate([out_t, t[keep]])
        out_y = np.concatenate([out_y, y[keep]])
    return _roll_surface(out_t[:n], out_y[:n])


def _figure_eight_bended(n, rng, params):
    # Two unit circles joined at the origin, lying in perpendicular planes.
    r = params.get("radius", 1.0)
    which = rng.integers(0, 2, n)
    theta = rng.uniform(0.0, 2 * np.pi, n)
    x = np.where(which == 0, r * np.cos(theta) - r, r - r * np.cos(theta))
    y = np.where(which == 0, r * np.sin(theta), 0.0)
    z = np.where(which == 0, 0.0, r * np.sin(theta))
    return np.column_stack([x, y, z])


def _cylinder_holes(n, rng, params):
    holes = int(params.get("holes", 3))
    radius = params.get("radius", 1.0)
    height = params.get("height", 4.0)
    hole_radius = params.get("hole_radius", 0.8)
    circ = 2 * np.pi * radius
    centers_arc = (np.arange(holes) + 0.5) * circ / max(holes, 1)
    out = []
    have = 0
    while have < n:
        theta = rng.uniform(0.0, 2 * np.pi, 2 * n)
        z = rng.uniform(0.0, height, 2 * n)
        arc = theta * radius
        keep = np.ones(2 * n, dtype=bool)
        for c in centers_arc:
            darc = np.abs(arc - c)
            darc = np.minimum(darc, circ - darc)  # wrap around the cylinder
            keep &= darc**2 + (z - 0.5 * height) ** 2 > hole_radius**2
        pts = np.column_stack(
            [radius * np.cos(theta[keep]), radius * np.sin(theta[keep]), z[keep]]
        )
        out.append(pts)
        have += pts.shape[0]
    return np.concatenate(out)[:n]


def _s_surface_holes(n, rng, params):
    # Unit-speed S-curve (sin t, sign(t)(cos t - 1)) extruded along y,
    # with a grid of circular holes carved in (t, y) parameter space.
    holes = int(params.get("holes", 4))
    height = params.get("height", 6.0)
    hole_radius = params.get("hole_radius", 1.0)
    t0, t1 = -1.5 * np.pi, 1.5 * np.pi
    cols = int(params.get("hole_cols", 2 if holes == 4 else holes))
    rows = max(1, holes // cols)
    centers = [
        (
            t0 + (ci + 0.5) * (t1 - t0) / cols,
            (ri + 0.5) * height / rows,
        )
        for ri in range(rows)
        for ci in range(cols)
    ][:holes]
    out = []
    have = 0
    while have < n:
        t = rng.uniform(t0, t1, 2 * n)
        y = rng.uniform(0.0, height, 2 * n)
        keep = np.ones(2 * n, dtype=bool)
        for ct, cy in centers:
            keep &= (t - ct) ** 2 + (y - cy) ** 2 > hole_radius**2
        tk, yk = t[keep], y[keep]
        x = np.sin(tk)
        z = np.sign(tk) * (np.cos(tk) - 1.0)
        out.append(np.column_stack([x, yk, z]))
        have += tk.shape[0]
    return np.concatenate(out)[:n]


_SHAPES = {
    "circle": _circle,
    "torus": _torus,
    "swiss_roll": _swiss_roll,
    "swiss_roll_hole": _swiss_roll_hole,
    "figure_eight_bended": _figure_eight_bended,
    "cylinder_holes": _cylinder_holes,
    "s_surface_holes": _s_surface_holes,
}


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------

def cloud_to_csv(cloud: PointCloud, header: bool = False) -> str:
    """Serialize a point cloud as CSV text, one row per point."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header:
        writer.writerow(["x%d" % i for i in range(cloud.dim)])
    for row in cloud.points:
        writer.writerow(["%.17g" % v for v in row])
    return buf.getvalue()


def cloud_from_csv(text: str) -> PointCloud:
    """Parse CSV text into a point cloud; a single non-numeric first row is
    treated as a header."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ParameterError("empty CSV input")
    start = 0
    try:
        [float(v) for v in rows[0]]
    except ValueError:
        start = 1
    if start >= len(rows):
        raise ParameterError("CSV contains a header but no data rows")
    pts = np.array([[float(v) for v in r] for r in rows[start:]], dtype=np.float64)
    return PointCloud(points=pts)


def save_cloud(path, cloud: PointCloud, header: bool = False):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(cloud_to_csv(cloud, header=header))


def load_cloud(path) -> PointCloud:
    with open(path, "r", encoding="utf-8") as fh:
        return cloud_from_csv(fh.read())
