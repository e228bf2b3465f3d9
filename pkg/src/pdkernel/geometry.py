"""Point clouds in R^1..R^3, regular circle samples and set distances."""
from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist

from .errors import PdkernelError


class PointCloud:
    """A finite ordered point set in R^d, d <= 3.

    Parameters
    ----------
    points : array-like, shape (n, d)
        Coordinates; all entries must be finite.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2:
            raise PdkernelError("points must be a 2-d array of shape (n, d)")
        if pts.shape[1] not in (1, 2, 3):
            raise PdkernelError(f"ambient dimension must be 1, 2 or 3, got {pts.shape[1]}")
        if pts.shape[0] == 0:
            raise PdkernelError("point cloud must be nonempty")
        if not np.all(np.isfinite(pts)):
            raise PdkernelError("point cloud contains non-finite coordinates")
        self.points = pts

    @property
    def dim(self):
        return self.points.shape[1]

    @property
    def n_points(self):
        return self.points.shape[0]

    def diameter(self):
        d = cdist(self.points, self.points)
        return float(d.max())

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"PointCloud(n={self.n_points}, dim={self.dim})"


def as_cloud(X) -> PointCloud:
    return X if isinstance(X, PointCloud) else PointCloud(X)


def circle_points(x, y, r, N) -> PointCloud:
    """N points at angles 2*pi*i/N on the circle of radius r centered at (x, y)."""
    if N < 3:
        raise PdkernelError(f"need at least 3 points on a circle, got {N}")
    if r <= 0:
        raise PdkernelError(f"circle radius must be positive, got {r}")
    theta = 2.0 * np.pi * np.arange(N) / N
    pts = np.column_stack([x + r * np.cos(theta), y + r * np.sin(theta)])
    return PointCloud(pts)


def hausdorff_distance(X, Y) -> float:
    """Hausdorff distance between two clouds under the Euclidean metric."""
    X, Y = as_cloud(X), as_cloud(Y)
    if X.dim != Y.dim:
        raise PdkernelError(f"dimension mismatch: {X.dim} vs {Y.dim}")
    d = cdist(X.points, Y.points)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))
