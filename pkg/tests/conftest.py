import numpy as np
import pytest

from skelmap.geometry import PointCloud


def random_cloud(n, dim, seed):
    rng = np.random.default_rng(seed)
    return PointCloud(points=rng.uniform(-1.0, 1.0, size=(n, dim)))


@pytest.fixture
def small_cloud():
    return random_cloud(12, 3, 0)
