import numpy as np
import pytest

from skelmap.geometry import (
    NeighborhoodGraph,
    ParameterError,
    PointCloud,
    build_knn_graph,
    generate_shape,
)
from skelmap.skeleton import build_cover, compute_filter, mapper_skeleton
from skelmap.tearing import CutSpec, evaluate_tear, rank_cuts, tear_graph


def _circle_skeleton(seed=0, n=150, k=10):
    cloud = generate_shape("circle", n, noise=0.0, seed=seed)
    graph = build_knn_graph(cloud, k)
    f = compute_filter(cloud, graph, "dtb", "extreme")
    sk = mapper_skeleton(cloud, graph, f, build_cover(f, 6, 0.3), dbscan_eps=0.3)
    return cloud, graph, sk


class TestCutSpec:
    def test_t_bounds(self):
        with pytest.raises(ParameterError):
            CutSpec(skeleton_edge=(0, 1), t=1.5)
        with pytest.raises(ParameterError):
            CutSpec(skeleton_edge=(0, 1), t=-0.1)


class TestTearGraph:
    def test_unknown_edge_rejected(self):
        cloud, graph, sk = _circle_skeleton()
        with pytest.raises(ParameterError):
            tear_graph(cloud, graph, sk, CutSpec(skeleton_edge=(0, 99)))

    def test_removed_edges_cross_the_plane(self):
        cloud, graph, sk = _circle_skeleton()
        u, v, _ = sk.edges[0]
        result = tear_graph(cloud, graph, sk, CutSpec(skeleton_edge=(u, v)))
        cu = cloud.points[sk.centroid_of(u)]
        cv = cloud.points[sk.centroid_of(v)]
        normal = (cv - cu) / np.linalg.norm(cv - cu)
        q = 0.5 * (cu + cv)
        for i, j, _ in result.removed_edges:
            si = (cloud.points[i] - q) @ normal
            sj = (cloud.points[j] - q) @ normal
            assert (si >= -1e-12) != (sj >= -1e-12)

    def test_torn_graph_loses_exactly_removed(self):
        cloud, graph, sk = _circle_skeleton()
        u, v, _ = sk.edges[0]
        result = tear_graph(cloud, graph, sk, CutSpec(skeleton_edge=(u, v)))
        assert result.torn_graph.edge_count == graph.edge_count - result.removed_count

    def test_no_crossing_edges_removes_nothing(self):
        # two far-apart clusters whose graph has no inter-cluster edge
        pts = np.concatenate([np.random.default_rng(0).uniform(size=(5, 2)),
                              np.random.default_rng(1).uniform(size=(5, 2)) + 100.0])
        cloud = PointCloud(points=pts)
        edges = [[0, 1], [1, 2], [2, 3], [3, 4], [5, 6], [6, 7], [7, 8], [8, 9]]
        graph = NeighborhoodGraph(
            vertex_count=10,
            edge_index=np.array(edges),
            edge_weight=np.ones(len(edges)),
            k=1,
        )
        from skelmap.skeleton import CoverSpec, FilterValues, Skeleton, SkeletonNode

        nodes = (
            SkeletonNode(id=0, members=tuple(range(5)), centroid=0, interval=0),
            SkeletonNode(id=1, members=tuple(range(5, 10)), centroid=5, interval=1),
        )
        sk = Skeleton(
            nodes=nodes,
            edges=((0, 1, 1),),
            filter=FilterValues(values=np.zeros(10), name="custom"),
            cover=CoverSpec(intervals=((0.0, 1.0), (0.5, 1.5)), n=2, p=0.3),
        )
        result = tear_graph(cloud, graph, sk, CutSpec(skeleton_edge=(0, 1)))
        assert result.removed_count == 0

    def test_global_plane_removes_at_least_local(self):
        cloud, graph, sk = _circle_skeleton()
        u, v, _ = sk.edges[0]
        cut = CutSpec(skeleton_edge=(u, v))
        local = tear_graph(cloud, graph, sk, cut)
        everywhere = tear_graph(cloud, graph, sk, cut, global_plane=True)
        assert everywhere.removed_count >= local.removed_count

    def test_bad_radius(self):
        cloud, graph, sk = _circle_skeleton()
        u, v, _ = sk.edges[0]
        with pytest.raises(ParameterError):
            tear_graph(cloud, graph, sk, CutSpec(skeleton_edge=(u, v), locality_radius=-1.0))


class TestEvaluateAndRank:
    def test_disconnected_result_left_unevaluated(self):
        cloud, graph, sk = _circle_skeleton()
        u, v, _ = sk.edges[0]
        result = tear_graph(cloud, graph, sk, CutSpec(skeleton_edge=(u, v), locality_radius=100.0, t=0.0))
        if result.connected:
            pytest.skip("cut did not disconnect this sample")
        evaluated = evaluate_tear(cloud, result)
        assert evaluated.embedding is None

    def test_rank_orders_valid_first_then_quality(self):
        cloud, graph, sk = _circle_skeleton()
        results = rank_cuts(cloud, graph, sk, subsample_size=100, seed=0)
        assert len(results) == sk.edge_count
        seen_invalid = False
        for r in results:
            if not r.connected:
                seen_invalid = True
            else:
                assert not seen_invalid  # valid cuts precede invalid ones
        valid = [r for r in results if r.connected]
        for a, b in zip(valid, valid[1:]):
            assert (-a.pb1, a.wd1) <= (-b.pb1, b.wd1)

    def test_rank_deterministic(self):
        cloud, graph, sk = _circle_skeleton()
        a = rank_cuts(cloud, graph, sk, subsample_size=100, seed=0)
        b = rank_cuts(cloud, graph, sk, subsample_size=100, seed=0)
        assert [r.cut.skeleton_edge for r in a] == [r.cut.skeleton_edge for r in b]
        assert [r.wd1 for r in a] == [r.wd1 for r in b]
