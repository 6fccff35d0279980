import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skelmap.diagram_metrics import bottleneck, brute_force_match, wasserstein
from skelmap.geometry import ParameterError
from skelmap.persistence import PersistenceDiagram


def _diagram(pairs, dim=1, cap=10.0):
    return PersistenceDiagram(dim=dim, pairs=np.array(pairs, float).reshape(-1, 2), scale_cap=cap)


def _random_diagram(rng, max_points=4):
    m = int(rng.integers(0, max_points + 1))
    births = rng.uniform(0.0, 2.0, m)
    deaths = births + rng.uniform(0.01, 2.0, m)
    return _diagram(np.column_stack([births, deaths]) if m else np.empty((0, 2)))


class TestHandCases:
    def test_identical_is_zero(self):
        dg = _diagram([[0.2, 1.0], [0.5, 2.0]])
        assert wasserstein(dg, dg, 2.0)[0] == 0.0
        assert bottleneck(dg, dg)[0] == 0.0

    def test_single_point_vs_empty(self):
        a = _diagram([[0.0, 2.0]])
        b = _diagram(np.empty((0, 2)))
        # nearest diagonal point costs (death - birth) / 2 = 1
        assert abs(wasserstein(a, b, 2.0)[0] - 1.0) < 1e-12
        assert abs(bottleneck(a, b)[0] - 1.0) < 1e-12

    def test_two_bars(self):
        a = _diagram([[0.0, 4.0]])
        b = _diagram([[0.0, 2.0]])
        assert abs(wasserstein(a, b, 2.0)[0] - 2.0) < 1e-12
        assert abs(bottleneck(a, b)[0] - 2.0) < 1e-12


class TestContracts:
    def test_dimension_mismatch(self):
        with pytest.raises(ParameterError):
            wasserstein(_diagram([[0, 1]], dim=0), _diagram([[0, 1]], dim=1), 2.0)

    def test_scale_cap_mismatch(self):
        a = _diagram([[0, 1]], cap=5.0)
        b = _diagram([[0, 1]], cap=6.0)
        with pytest.raises(ParameterError):
            wasserstein(a, b, 2.0)
        assert wasserstein(a, b, 2.0, ignore_scale_cap=True)[0] == 0.0

    def test_unequal_infinite_counts(self):
        a = _diagram([[0.0, math.inf]], dim=0)
        b = _diagram(np.empty((0, 2)), dim=0)
        assert math.isinf(wasserstein(a, b, 2.0)[0])

    def test_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            a, b = _random_diagram(rng), _random_diagram(rng)
            assert abs(wasserstein(a, b, 2.0)[0] - wasserstein(b, a, 2.0)[0]) < 1e-12
            assert abs(bottleneck(a, b)[0] - bottleneck(b, a)[0]) < 1e-12

    def test_matching_covers_all_points(self):
        a = _diagram([[0.0, 1.0], [0.5, 3.0]])
        b = _diagram([[0.1, 1.1]])
        _, matching = wasserstein(a, b, 2.0)
        left = [ia for ia, _ in matching.assignments if ia is not None]
        right = [ib for _, ib in matching.assignments if ib is not None]
        assert sorted(left) == [0, 1]
        assert sorted(right) == [0]


class TestOracle:
    @given(st.integers(0, 500))
    @settings(max_examples=40, deadline=None)
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        a, b = _random_diagram(rng), _random_diagram(rng)
        for p in (1.0, 2.0, 3.0):
            assert abs(wasserstein(a, b, p)[0] - brute_force_match(a, b, p)[0]) < 1e-9
        assert abs(bottleneck(a, b)[0] - brute_force_match(a, b, math.inf)[0]) < 1e-9
