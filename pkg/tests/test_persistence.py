import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skelmap.geometry import ParameterError, PointCloud
from skelmap.persistence import (
    PersistenceDiagram,
    brute_force_persistence,
    enclosing_radius,
    persistent_betti,
    vr_persistence,
)

from conftest import random_cloud


def _diagram(pairs, dim=1, cap=10.0):
    return PersistenceDiagram(dim=dim, pairs=np.array(pairs, float).reshape(-1, 2), scale_cap=cap)


class TestVrPersistence:
    def test_two_points_dim0(self):
        cloud = PointCloud(points=np.array([[0.0], [3.0]]))
        dg0 = vr_persistence(cloud.euclidean_distances(), max_dim=0)[0]
        pairs = dg0.sorted_pairs()
        assert len(pairs) == 2
        # one merge at the gap distance, one essential component
        assert pairs[0] == (0.0, 3.0)
        assert math.isinf(pairs[1][1])

    def test_dim0_deaths_are_mst_edges(self):
        cloud = random_cloud(10, 2, 0)
        from scipy.sparse.csgraph import minimum_spanning_tree

        d = cloud.euclidean_distances().values
        mst = minimum_spanning_tree(d).toarray()
        mst_weights = np.sort(mst[mst > 0])
        dg0 = vr_persistence(cloud.euclidean_distances(), max_dim=0)[0]
        deaths = np.sort(dg0.finite_pairs()[:, 1])
        assert np.allclose(deaths, mst_weights)

    def test_square_loop(self):
        # unit square: one loop born at side length 1, dead at diagonal sqrt 2
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        dg1 = vr_persistence(PointCloud(points=pts).euclidean_distances(), max_dim=1)[1]
        pairs = dg1.sorted_pairs()
        assert len(pairs) == 1
        assert np.allclose(pairs[0], [1.0, math.sqrt(2.0)])

    def test_degenerate_pairs_dropped(self):
        cloud = random_cloud(8, 2, 1)
        for dg in vr_persistence(cloud.euclidean_distances(), max_dim=1):
            finite = dg.finite_pairs()
            assert np.all(finite[:, 1] > finite[:, 0])

    def test_scale_cap_caps_filtration(self):
        cloud = random_cloud(9, 2, 2)
        d = cloud.euclidean_distances()
        cap = 0.4
        for dg in vr_persistence(d, max_dim=1, scale_cap=cap):
            finite = dg.finite_pairs()
            assert np.all(finite <= cap + 1e-15)

    def test_bad_cap(self):
        cloud = random_cloud(5, 2, 3)
        with pytest.raises(ParameterError):
            vr_persistence(cloud.euclidean_distances(), scale_cap=-1.0)

    @given(st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 10))
        dim = int(rng.integers(1, 4))
        cloud = PointCloud(points=rng.uniform(size=(n, dim)))
        d = cloud.euclidean_distances()
        fast = vr_persistence(d, max_dim=1)
        slow = brute_force_persistence(d, max_dim=1)
        for a, b in zip(fast, slow):
            assert np.array_equal(a.sorted_pairs(), b.sorted_pairs())


class TestEnclosingRadius:
    def test_definition(self):
        d = random_cloud(12, 3, 4).euclidean_distances().values
        assert enclosing_radius(d) == np.min(np.max(d, axis=1))

    def test_single_point(self):
        assert enclosing_radius(np.zeros((1, 1))) == 0.0


class TestPersistentBetti:
    def test_empty_diagram(self):
        summary = persistent_betti(_diagram(np.empty((0, 2))))
        assert summary.count == 0

    def test_unit_square_with_threshold(self):
        summary = persistent_betti(_diagram([[1.0, math.sqrt(2)]]), threshold=0.2)
        assert summary.count == 1

    def test_clean_eight_features(self):
        # eight long bars far above a noise floor: widest gap isolates all 8
        bars = [[0.0, 5.0 + 0.01 * i] for i in range(8)]
        noise = [[0.0, 0.2 + 0.01 * i] for i in range(20)]
        summary = persistent_betti(_diagram(bars + noise))
        assert summary.count == 8
        assert not summary.ambiguous

    def test_ambiguity_flag(self):
        # evenly spaced persistences: no gap clearly dominates
        summary = persistent_betti(_diagram([[0.0, 0.3], [0.0, 0.6], [0.0, 0.9]]))
        assert summary.ambiguous

    def test_threshold_counts_infinite(self):
        dg = _diagram([[0.0, math.inf], [0.0, 2.0], [0.0, 0.1]], dim=0)
        summary = persistent_betti(dg, threshold=1.0)
        assert summary.count == 2


class TestDiagramJson:
    def test_round_trip_with_infinity(self):
        dg = _diagram([[0.0, math.inf], [0.5, 2.0]], dim=0, cap=3.0)
        back = PersistenceDiagram.from_json(dg.to_json())
        assert back.dim == dg.dim
        assert back.scale_cap == dg.scale_cap
        assert np.array_equal(back.sorted_pairs(), dg.sorted_pairs())
