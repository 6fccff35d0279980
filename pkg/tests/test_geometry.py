import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skelmap.geometry import (
    DisconnectedGraphError,
    NeighborhoodGraph,
    ParameterError,
    PointCloud,
    build_knn_graph,
    cloud_from_csv,
    cloud_to_csv,
    delay_embedding,
    generate_shape,
    geodesic_distances,
    maxmin_subsample,
)

from conftest import random_cloud


class TestPointCloud:
    def test_rejects_non_2d(self):
        with pytest.raises(ParameterError):
            PointCloud(points=np.zeros(3))

    def test_rejects_nan(self):
        with pytest.raises(ParameterError):
            PointCloud(points=np.array([[0.0, np.nan]]))

    def test_distances_symmetric_zero_diagonal(self):
        cloud = random_cloud(20, 4, 1)
        d = cloud.euclidean_distances().values
        assert np.array_equal(d, d.T)
        assert np.all(np.diag(d) == 0)

    def test_subset_distances(self):
        cloud = random_cloud(10, 3, 2)
        sub = cloud.euclidean_distances([1, 4, 7]).values
        full = cloud.euclidean_distances().values
        assert np.allclose(sub, full[np.ix_([1, 4, 7], [1, 4, 7])])


class TestKnnGraph:
    def test_edges_stored_once_i_lt_j(self):
        g = build_knn_graph(random_cloud(30, 3, 3), 4)
        assert np.all(g.edge_index[:, 0] < g.edge_index[:, 1])
        assert len({tuple(e) for e in g.edge_index}) == g.edge_count

    def test_or_symmetrization(self):
        # an edge exists iff i is within j's k nearest or vice versa
        cloud = random_cloud(15, 2, 4)
        g = build_knn_graph(cloud, 3)
        d = cloud.euclidean_distances().values
        present = {tuple(e) for e in g.edge_index}
        for i in range(cloud.n):
            row = d[i].copy()
            row[i] = np.inf
            for j in np.argsort(row, kind="stable")[:3]:
                a, b = min(i, int(j)), max(i, int(j))
                assert (a, b) in present

    def test_k_out_of_range(self):
        cloud = random_cloud(5, 2, 0)
        with pytest.raises(ParameterError):
            build_knn_graph(cloud, 0)
        with pytest.raises(ParameterError):
            build_knn_graph(cloud, 5)


class TestGeodesic:
    def _path_graph(self):
        return NeighborhoodGraph(
            vertex_count=3,
            edge_index=np.array([[0, 1], [1, 2]]),
            edge_weight=np.array([1.0, 2.0]),
            k=1,
        )

    def test_path_sum(self):
        geo = geodesic_distances(self._path_graph())
        assert geo.values[0, 2] == 3.0

    def test_direct_edge(self):
        geo = geodesic_distances(self._path_graph())
        assert geo.values[0, 1] == 1.0

    def test_disconnected_marks_unreachable(self):
        g = NeighborhoodGraph(
            vertex_count=4,
            edge_index=np.array([[0, 1], [2, 3]]),
            edge_weight=np.array([1.0, 1.0]),
            k=1,
        )
        geo = geodesic_distances(g)
        assert geo.has_unreachable
        assert geo.unreachable[0, 2]
        with pytest.raises(DisconnectedGraphError):
            geo.require_reachable()

    def test_sources_subset(self):
        geo = geodesic_distances(self._path_graph(), sources=[2])
        assert geo.values.shape == (1, 3)
        assert geo.values[0, 0] == 3.0


class TestMaxminSubsample:
    def test_deterministic(self):
        cloud = random_cloud(50, 3, 5)
        assert maxmin_subsample(cloud, 10, seed=3) == maxmin_subsample(cloud, 10, seed=3)

    def test_distinct_indices(self):
        cloud = random_cloud(50, 3, 6)
        idx = maxmin_subsample(cloud, 20, seed=0)
        assert len(set(idx)) == 20

    def test_explicit_start(self):
        cloud = random_cloud(20, 2, 7)
        assert maxmin_subsample(cloud, 5, start=4)[0] == 4

    @given(st.integers(0, 100))
    @settings(max_examples=20, deadline=None)
    def test_full_sample_is_permutation(self, seed):
        cloud = random_cloud(12, 2, 8)
        idx = maxmin_subsample(cloud, 12, seed=seed)
        assert sorted(idx) == list(range(12))


class TestDelayEmbedding:
    def test_window_rows(self):
        cloud = delay_embedding(np.arange(10.0), window=4, step=2)
        assert cloud.points.shape == (4, 4)
        assert np.array_equal(cloud.points[1], np.arange(2.0, 6.0))

    def test_bad_window(self):
        with pytest.raises(ParameterError):
            delay_embedding(np.arange(5.0), window=6)


class TestGenerateShape:
    def test_circle_unit_radius(self):
        cloud = generate_shape("circle", 100, noise=0.0, seed=0)
        radii = np.linalg.norm(cloud.points, axis=1)
        assert np.all(np.abs(radii - 1.0) < 1e-12)

    def test_deterministic_per_seed(self):
        a = generate_shape("torus", 50, noise=0.01, seed=3)
        b = generate_shape("torus", 50, noise=0.01, seed=3)
        assert np.array_equal(a.points, b.points)

    def test_unknown_shape(self):
        with pytest.raises(ParameterError):
            generate_shape("klein_bottle", 10)

    def test_bad_n(self):
        with pytest.raises(ParameterError):
            generate_shape("circle", 0)

    def test_requested_size(self):
        for shape in ("swiss_roll", "swiss_roll_hole", "cylinder_holes", "s_surface_holes"):
            assert generate_shape(shape, 321, seed=1).n == 321


class TestCsv:
    def test_round_trip_exact(self):
        cloud = random_cloud(25, 3, 9)
        back = cloud_from_csv(cloud_to_csv(cloud))
        assert np.array_equal(cloud.points, back.points)

    def test_header_skipped(self):
        cloud = random_cloud(4, 2, 10)
        back = cloud_from_csv(cloud_to_csv(cloud, header=True))
        assert np.array_equal(cloud.points, back.points)
