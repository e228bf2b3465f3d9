"""Weight functions and non-kernel diagram representations.

Weights act on diagram points (birth, death); the landscape is the sequence
of k-th largest tent functions, kept exactly as piecewise-linear data; the
image integrates a weighted Gaussian surface over a regular pixel grid using
exact normal-CDF differences per axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import PdkernelError
from .persistence import PersistenceDiagram


def _pairs(D):
    if isinstance(D, PersistenceDiagram):
        return D.pairs
    return np.asarray(D, dtype=np.float64).reshape(-1, 2)


class WeightFn:
    """Base: maps an (m, 2) array of diagram points to m weights."""

    kind = "abstract"

    def __call__(self, points):
        raise NotImplementedError

    def describe(self):
        return {"kind": self.kind}


class ArcWeight(WeightFn):
    """w(x) = arctan(C * pers(x)^p) for pers > 0, else 0."""

    kind = "arc"

    def __init__(self, C, p=5):
        if C <= 0:
            raise PdkernelError("arc weight needs C > 0")
        if int(p) != p or p < 1:
            raise PdkernelError("arc weight needs a positive integer degree p")
        self.C = float(C)
        self.p = int(p)

    def __call__(self, points):
        pers = np.maximum(_pairs(points)[:, 1] - _pairs(points)[:, 0], 0.0)
        return np.arctan(self.C * pers ** self.p)

    def describe(self):
        return {"kind": self.kind, "C": self.C, "p": self.p}


class PersLinearWeight(WeightFn):
    """Piecewise linear in persistence: 0 below 0, pers/L on [0, L], 1 above."""

    kind = "pers_linear"

    def __init__(self, L):
        if L <= 0:
            raise PdkernelError("pers_linear weight needs L > 0")
        self.L = float(L)

    def __call__(self, points):
        pers = _pairs(points)[:, 1] - _pairs(points)[:, 0]
        return np.clip(pers / self.L, 0.0, 1.0)

    def describe(self):
        return {"kind": self.kind, "L": self.L}


class OneWeight(WeightFn):
    kind = "one"

    def __call__(self, points):
        return np.ones(len(_pairs(points)))


class PssSignWeight(WeightFn):
    """+1 above the diagonal, -1 below, 0 on it (mirrored-diagram embedding)."""

    kind = "pss_sign"

    def __call__(self, points):
        P = _pairs(points)
        return np.sign(P[:, 1] - P[:, 0])


def eval_weight(w: WeightFn, point):
    """Weight of a single diagram point."""
    return float(w(np.asarray(point, dtype=np.float64).reshape(1, 2))[0])


# ---------------------------------------------------------------------------
# persistence landscape

@dataclass
class Landscape:
    """Piecewise-linear landscape levels on a shared breakpoint grid.

    levels[k-1] is the k-th largest tent value at each grid point; all levels
    vanish off the grid and beyond len(levels).
    """

    grid: np.ndarray     # (T,) sorted breakpoints
    levels: np.ndarray   # (K, T)

    def value(self, k, t):
        """lambda(k, t), exact (linear between breakpoints, 0 outside)."""
        if k < 1 or k > self.levels.shape[0] or self.levels.shape[1] == 0:
            return 0.0
        return float(np.interp(t, self.grid, self.levels[k - 1], left=0.0, right=0.0))


def build_landscape(D) -> Landscape:
    P = _pairs(D)
    m = len(P)
    if m == 0:
        return Landscape(np.empty(0), np.empty((0, 0)))
    b, d = P[:, 0], P[:, 1]
    # tent slopes are +-1, so level order can change only where a rising edge
    # meets a falling edge: t = (b_i + d_j) / 2, plus every birth and death
    cross = (b[:, None] + d[None, :]) / 2.0
    grid = np.unique(np.concatenate([b, d, cross.ravel()]))
    tents = np.minimum(grid[None, :] - b[:, None], d[:, None] - grid[None, :])
    np.maximum(tents, 0.0, out=tents)
    tents.sort(axis=0)
    return Landscape(grid, tents[::-1])


def landscape_inner(l1: Landscape, l2: Landscape) -> float:
    """sum_k integral of lambda_1(k,.) * lambda_2(k,.), exact."""
    K = min(l1.levels.shape[0], l2.levels.shape[0])
    if K == 0 or len(l1.grid) == 0 or len(l2.grid) == 0:
        return 0.0
    grid = np.union1d(l1.grid, l2.grid)
    F = np.vstack([np.interp(grid, l1.grid, l1.levels[k], left=0.0, right=0.0)
                   for k in range(K)])
    G = np.vstack([np.interp(grid, l2.grid, l2.levels[k], left=0.0, right=0.0)
                   for k in range(K)])
    h = np.diff(grid)
    F0, F1 = F[:, :-1], F[:, 1:]
    G0, G1 = G[:, :-1], G[:, 1:]
    seg = h * (2.0 * F0 * G0 + F0 * G1 + F1 * G0 + 2.0 * F1 * G1) / 6.0
    return float(seg.sum())


# ---------------------------------------------------------------------------
# persistence image

@dataclass
class PersistenceImage:
    """Pixel integrals of the weighted Gaussian surface over (0, L]^2.

    pixels[i, j] integrates over the cell ((i-1)L/M, iL/M] x ((j-1)L/M, jL/M]
    in (birth, death) coordinates, 1-based (i, j).
    """

    grid_size: int
    length: float
    sigma: float
    weight: WeightFn
    pixels: np.ndarray  # (M, M)

    def to_vector(self):
        """Flattened vector with entry i + M*(j-1) (1-based) = pixels[i, j]."""
        return self.pixels.ravel(order="F")


def build_image(D, grid_size, length, sigma, weight: WeightFn) -> PersistenceImage:
    M = int(grid_size)
    if M < 1:
        raise PdkernelError("image grid size must be >= 1")
    if length <= 0 or sigma <= 0:
        raise PdkernelError("image needs positive length and sigma")
    P = _pairs(D)
    edges = np.arange(M + 1) * (length / M)
    if len(P) == 0:
        return PersistenceImage(M, float(length), float(sigma), weight, np.zeros((M, M)))
    w = weight(P)
    cdf_b = ndtr((edges[None, :] - P[:, 0][:, None]) / sigma)
    cdf_d = ndtr((edges[None, :] - P[:, 1][:, None]) / sigma)
    db = np.diff(cdf_b, axis=1)
    dd = np.diff(cdf_d, axis=1)
    pixels = (db * w[:, None]).T @ dd
    return PersistenceImage(M, float(length), float(sigma), weight, pixels)


def image_length(diagrams) -> float:
    """Grid upper bound for a collection: the largest death value."""
    deaths = [np.max(_pairs(D)[:, 1]) for D in diagrams if len(_pairs(D))]
    if not deaths:
        raise PdkernelError("cannot size an image grid from empty diagrams")
    return float(max(deaths))
