import numpy as np
import pytest

from pdkernel.errors import PdkernelError
from pdkernel.geometry import PointCloud, circle_points, hausdorff_distance


def test_circle_points_square():
    pts = circle_points(0, 0, 1, 4).points
    expected = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    assert np.allclose(pts, expected, atol=1e-15)


def test_circle_points_equilateral_chord():
    pts = circle_points(2, 3, 1, 3).points
    assert len(pts) == 3
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(np.linalg.norm(pts[i] - pts[j]) - np.sqrt(3)) < 1e-12


def test_circle_points_s2_configuration():
    pts = circle_points(0, 0, 0.2, 10).points
    assert pts.shape == (10, 2)
    radii = np.linalg.norm(pts, axis=1)
    assert np.all(np.abs(radii - 0.2) < 1e-12)


def test_circle_points_radius_invariant(rng):
    for _ in range(10):
        x, y = rng.normal(size=2)
        r = rng.uniform(0.1, 5)
        n = int(rng.integers(3, 40))
        pts = circle_points(x, y, r, n).points
        radii = np.linalg.norm(pts - [x, y], axis=1)
        assert np.all(np.abs(radii - r) < 1e-12)


def test_circle_points_rejects_bad_input():
    with pytest.raises(PdkernelError):
        circle_points(0, 0, 1, 2)
    with pytest.raises(PdkernelError):
        circle_points(0, 0, 0, 5)
    with pytest.raises(PdkernelError):
        circle_points(0, 0, -1, 5)


def test_cloud_validation():
    with pytest.raises(PdkernelError):
        PointCloud(np.empty((0, 2)))
    with pytest.raises(PdkernelError):
        PointCloud([[np.nan, 0]])
    with pytest.raises(PdkernelError):
        PointCloud(np.zeros((3, 4)))


def test_hausdorff_identity_and_single_pair():
    X = PointCloud([[0, 0], [1, 1]])
    assert hausdorff_distance(X, X) == 0.0
    A = PointCloud([[0, 0]])
    B = PointCloud([[3, 4]])
    assert abs(hausdorff_distance(A, B) - 5.0) < 1e-15


def test_hausdorff_brute_force(rng):
    for _ in range(20):
        X = rng.random((10, 3))
        Y = rng.random((8, 3))
        d = np.linalg.norm(X[:, None, :] - Y[None, :, :], axis=2)
        expected = max(d.min(axis=1).max(), d.min(axis=0).max())
        assert abs(hausdorff_distance(PointCloud(X), PointCloud(Y)) - expected) < 1e-12


def test_hausdorff_metric_properties(rng):
    for _ in range(20):
        X, Y, Z = (PointCloud(rng.random((6, 2))) for _ in range(3))
        dxy = hausdorff_distance(X, Y)
        dyx = hausdorff_distance(Y, X)
        assert abs(dxy - dyx) < 1e-14
        assert dxy <= hausdorff_distance(X, Z) + hausdorff_distance(Z, Y) + 1e-12


def test_hausdorff_rejects_dim_mismatch():
    with pytest.raises(PdkernelError):
        hausdorff_distance(PointCloud([[0, 0]]), PointCloud([[0, 0, 0]]))
