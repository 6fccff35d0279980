import json

import numpy as np
import pytest

from skelmap.embedding import Embedding, isomap
from skelmap.geometry import DistanceMatrix, ParameterError, generate_shape
from skelmap.quality import QualityReport, quality_report, residual_variance

from conftest import random_cloud


def _rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


class TestResidualVariance:
    def test_identical_matrices(self):
        d = random_cloud(20, 2, 0).euclidean_distances()
        assert residual_variance(d, d) < 1e-12

    def test_invariant_under_rigid_motion_and_scale(self):
        cloud = random_cloud(30, 2, 1)
        moved = Embedding(
            coords=3.0 * cloud.points @ _rotation(0.7).T + np.array([5.0, -2.0]),
            method="mds",
        )
        rv = residual_variance(cloud.euclidean_distances(), moved.euclidean_distances())
        assert rv < 1e-12

    def test_constant_distances_rejected(self):
        values = np.ones((4, 4)) - np.eye(4)
        d = DistanceMatrix(values=values, kind="euclidean")
        with pytest.raises(ParameterError):
            residual_variance(d, d)

    def test_shape_mismatch(self):
        a = random_cloud(10, 2, 2).euclidean_distances()
        b = random_cloud(11, 2, 2).euclidean_distances()
        with pytest.raises(ParameterError):
            residual_variance(a, b)


class TestQualityReport:
    def test_isometric_copy_scores_clean(self):
        cloud = random_cloud(60, 2, 3)
        emb = Embedding(coords=cloud.points @ _rotation(1.1).T, method="mds")
        report = quality_report(cloud, emb)
        assert report.rv < 1e-10
        assert report.wd0 < 1e-10
        assert report.wd1 < 1e-10
        assert report.pb1_before == report.pb1_after

    def test_isomap_uses_geodesic_convention(self):
        cloud = generate_shape("swiss_roll", 1000, noise=0.0, seed=0)
        emb = isomap(cloud, k=8, d=2)
        report = quality_report(cloud, emb, subsample_size=100)
        assert report.conventions["rv"] == "geodesic-vs-euclidean"
        assert report.rv < 0.05

    def test_row_count_mismatch(self):
        cloud = random_cloud(10, 2, 4)
        emb = Embedding(coords=np.zeros((9, 2)), method="mds")
        with pytest.raises(ParameterError):
            quality_report(cloud, emb)

    def test_json_fields(self):
        cloud = random_cloud(40, 2, 5)
        emb = Embedding(coords=cloud.points.copy(), method="mds")
        report = quality_report(cloud, emb)
        obj = json.loads(report.to_json())
        for key in ("rv", "wd0", "wd1", "pb1_before", "pb1_after", "conventions"):
            assert key in obj

    def test_csv_row_matches_header(self):
        cloud = random_cloud(40, 2, 6)
        emb = Embedding(coords=cloud.points.copy(), method="mds")
        report = quality_report(cloud, emb)
        assert len(report.csv_row().split(",")) == len(QualityReport.CSV_HEADER.split(","))
