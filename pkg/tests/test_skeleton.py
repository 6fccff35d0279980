import numpy as np
import pytest

from skelmap.geometry import ParameterError, PointCloud, build_knn_graph, generate_shape
from skelmap.skeleton import (
    CoverSpec,
    FilterValues,
    Skeleton,
    build_cover,
    choose_base_point,
    compute_filter,
    dbscan_labels,
    extract_landmarks,
    mapper_skeleton,
)

from conftest import random_cloud


def _circle_setup(seed, n=200, k=10):
    cloud = generate_shape("circle", n, noise=0.0, seed=seed)
    graph = build_knn_graph(cloud, k)
    f = compute_filter(cloud, graph, "dtb", "extreme")
    return cloud, graph, f


class TestBasePoint:
    def test_explicit_index(self):
        cloud = random_cloud(20, 2, 0)
        graph = build_knn_graph(cloud, 4)
        assert choose_base_point(cloud, graph, 7) == 7

    def test_index_out_of_range(self):
        cloud = random_cloud(10, 2, 1)
        graph = build_knn_graph(cloud, 3)
        with pytest.raises(ParameterError):
            choose_base_point(cloud, graph, 10)

    def test_barycenter_is_nearest_mean(self):
        cloud = random_cloud(30, 2, 2)
        graph = build_knn_graph(cloud, 5)
        base = choose_base_point(cloud, graph, "barycenter")
        dist = np.linalg.norm(cloud.points - cloud.points.mean(axis=0), axis=1)
        assert base == int(np.argmin(dist))

    def test_extreme_on_circle(self):
        # two-pass rule lands near the antipode of the central sample
        cloud, graph, f = _circle_setup(0)
        assert f.values.max() <= np.pi + 0.3
        assert f.values.max() >= np.pi - 0.3


class TestCover:
    def test_uniform_lengths_and_overlap(self):
        f = FilterValues(values=np.linspace(0.0, 10.0, 100), name="custom")
        cover = build_cover(f, 5, 0.4)
        lengths = [b - a for a, b in cover.intervals]
        assert np.allclose(lengths, lengths[0])
        for (a1, b1), (a2, b2) in zip(cover.intervals, cover.intervals[1:]):
            assert np.isclose((b1 - a2) / (b1 - a1), 0.4)

    def test_covers_range(self):
        f = FilterValues(values=np.linspace(-3.0, 7.0, 50), name="custom")
        cover = build_cover(f, 6, 0.3)
        assert np.isclose(cover.intervals[0][0], -3.0)
        assert np.isclose(cover.intervals[-1][1], 7.0)

    def test_membership_covers_every_point(self):
        values = np.linspace(0.0, 1.0, 77)
        f = FilterValues(values=values, name="custom")
        cover = build_cover(f, 8, 0.25)
        masks = cover.membership(values)
        assert np.all(np.any(np.stack(masks), axis=0))

    def test_bad_overlap(self):
        f = FilterValues(values=np.arange(10.0), name="custom")
        with pytest.raises(ParameterError):
            build_cover(f, 4, 1.0)


class TestDbscan:
    def test_two_blobs(self):
        pts = np.concatenate([np.zeros((5, 2)), np.full((5, 2), 10.0)])
        labels = dbscan_labels(pts, eps=1.0, minpts=3)
        assert len(set(labels)) == 2
        assert -1 not in labels

    def test_noise_label(self):
        pts = np.array([[0.0, 0.0], [0.1, 0.0], [0.2, 0.0], [50.0, 50.0]])
        labels = dbscan_labels(pts, eps=0.5, minpts=2)
        assert labels[3] == -1

    def test_deterministic(self):
        rng = np.random.default_rng(0)
        pts = rng.uniform(size=(40, 2))
        a = dbscan_labels(pts, eps=0.2, minpts=4)
        b = dbscan_labels(pts, eps=0.2, minpts=4)
        assert np.array_equal(a, b)


class TestMapperSkeleton:
    def test_single_interval_single_node(self):
        cloud = random_cloud(15, 2, 3)
        graph = build_knn_graph(cloud, 4)
        f = FilterValues(values=np.zeros(15), name="custom")
        cover = CoverSpec(intervals=((0.0, 0.0),), n=1, p=0.0)
        sk = mapper_skeleton(cloud, graph, f, cover, dbscan_eps=10.0, dbscan_minpts=2)
        assert sk.node_count == 1
        assert sk.edge_count == 0

    def test_every_point_in_some_node(self):
        cloud, graph, f = _circle_setup(1)
        sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.25)
        covered = set()
        for node in sk.nodes:
            covered.update(node.members)
        assert covered == set(range(cloud.n))

    def test_centroid_is_member(self):
        cloud, graph, f = _circle_setup(2)
        sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.25)
        for node in sk.nodes:
            assert node.centroid in node.members

    def test_edges_share_members(self):
        cloud, graph, f = _circle_setup(3)
        sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.25)
        for u, v, shared in sk.edges:
            overlap = set(sk.nodes[u].members) & set(sk.nodes[v].members)
            assert len(overlap) == shared > 0
            assert abs(sk.nodes[u].interval - sk.nodes[v].interval) <= 1

    def test_circle_cycle_rank_one_across_seeds(self):
        # the loop survives as exactly one independent cycle in the nerve
        for seed in range(5):
            cloud, graph, f = _circle_setup(seed)
            sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.25)
            assert sk.cycle_rank() == 1


class TestLandmarks:
    def test_sorted_and_distinct(self):
        cloud, graph, f = _circle_setup(4)
        sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.25)
        lm = extract_landmarks(sk)
        assert lm == sorted(set(lm))
        assert all(0 <= i < cloud.n for i in lm)


class TestSkeletonJson:
    def test_round_trip(self):
        cloud, graph, f = _circle_setup(5)
        sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.25)
        back = Skeleton.from_json(sk.to_json())
        assert back.edges == sk.edges
        assert [n.members for n in back.nodes] == [n.members for n in sk.nodes]
        assert back.cycle_rank() == sk.cycle_rank()
