"""Cech and Vietoris-Rips filtered complexes from a point cloud.

A Cech simplex appears at the radius of the minimal enclosing ball of its
vertices; a Rips simplex at half its diameter (edges present at d <= 2a).
Simplices of each dimension are stored as index arrays already sorted in
filtration order (value, then lexicographic vertices), which is a valid order
because enclosing-ball radii are monotone under taking faces.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.spatial.distance import pdist, squareform

from . import _core
from .errors import PdkernelError
from .geometry import PointCloud, as_cloud

_EPS = 1e-12
_LAZY_SORT_THRESHOLD = 200000


class Simplex:
    """A single simplex: sorted vertex indices plus its appearance value."""

    __slots__ = ("vertices", "value")

    def __init__(self, vertices, value):
        self.vertices = tuple(int(v) for v in vertices)
        self.value = float(value)

    @property
    def dim(self):
        return len(self.vertices) - 1

    def __repr__(self):
        return f"Simplex({self.vertices}, value={self.value:.6g})"

    def __eq__(self, other):
        return self.vertices == other.vertices and self.value == other.value


class FilteredComplex:
    """Filtered simplicial complex, stored as per-dimension index arrays.

    ``vertex_arrays(d)`` returns an (S_d, d+1) int array of vertex indices and
    ``values(d)`` the matching filtration values, both in the dimension's
    filtration order.  The complex is closed under faces up to dimension
    q_max + 1 and truncated at ``r_max``.
    """

    def __init__(self, n_vertices, kind, q_max, r_max, simplices_by_dim,
                 unsorted_dims=()):
        self.n_vertices = int(n_vertices)
        self.kind = kind
        self.q_max = int(q_max)
        self.r_max = float(r_max)
        self._by_dim = simplices_by_dim  # dim -> (verts (S,d+1) int32, values (S,))
        self._unsorted = set(unsorted_dims)  # dims still in enumeration order
        self._dists = None

    def _ensure_sorted(self, dim):
        if dim in self._unsorted:
            self._by_dim[dim] = _sort_simplices(*self._by_dim[dim])
            self._unsorted.discard(dim)

    def raw_arrays(self, dim):
        """(verts, values) as stored: filtration order, or lexicographic
        enumeration order for large dimensions not yet sorted."""
        if dim not in self._by_dim:
            return np.empty((0, dim + 1), dtype=np.int32), np.empty(0)
        return self._by_dim[dim]

    @property
    def max_dim(self):
        return max(self._by_dim)

    def n_simplices(self, dim=None):
        if dim is not None:
            return len(self._by_dim[dim][1]) if dim in self._by_dim else 0
        return sum(len(v[1]) for v in self._by_dim.values())

    def vertex_arrays(self, dim):
        if dim not in self._by_dim:
            return np.empty((0, dim + 1), dtype=np.int32)
        self._ensure_sorted(dim)
        return self._by_dim[dim][0]

    def values(self, dim):
        if dim not in self._by_dim:
            return np.empty(0, dtype=np.float64)
        self._ensure_sorted(dim)
        return self._by_dim[dim][1]

    def iter_simplices(self):
        """Yield Simplex objects in global filtration order (value, dim, lex)."""
        order = self.global_order()
        for dim, local in order:
            verts, vals = self._by_dim[dim]
            yield Simplex(verts[local], vals[local])

    def global_order(self):
        """Global filtration order as a list of (dim, local_index) pairs."""
        entries = []
        for dim in sorted(self._by_dim):
            self._ensure_sorted(dim)
            verts, vals = self._by_dim[dim]
            for local in range(len(vals)):
                entries.append((vals[local], dim, tuple(verts[local]), local))
        entries.sort(key=lambda e: (e[0], e[1], e[2]))
        return [(dim, local) for _, dim, _, local in entries]

    def dump(self, fh):
        """Debug dump, one line per simplex: ``value dim v0 v1 ...``."""
        for s in self.iter_simplices():
            fh.write(f"{s.value:.17g} {s.dim} " + " ".join(str(v) for v in s.vertices) + "\n")


def _condensed_index(i, j, n):
    # index of the (i, j) pair, i < j, in a condensed distance matrix
    return i * n - (i * (i + 1)) // 2 + (j - i - 1)


def _sort_simplices(verts, vals):
    # stable sort on value keeps the lexicographic enumeration order for ties
    order = np.argsort(vals, kind="stable")
    return np.ascontiguousarray(verts[order]), np.ascontiguousarray(vals[order])


def build_cech(X, q_max=1, r_max=None) -> FilteredComplex:
    """Cech filtration of a cloud, with simplices up to dimension q_max + 1.

    Simplex values are minimal-enclosing-ball radii; anything above ``r_max``
    (default: the cloud diameter, at which the complex is complete) is
    omitted.  Restricted to q_max in {1, 2} and ambient dimension <= 3 so the
    enclosing balls stay exact.
    """
    X = as_cloud(X)
    if q_max not in (1, 2):
        raise PdkernelError(f"Cech q_max must be 1 or 2, got {q_max}")
    n = X.n_points
    pts = X.points
    dcond = pdist(pts) if n > 1 else np.empty(0)
    if r_max is None:
        r_max = float(dcond.max()) if n > 1 else 0.0
    elif r_max <= 0 and n > 1:
        raise PdkernelError("r_max must be positive")

    by_dim = {0: (np.arange(n, dtype=np.int32).reshape(-1, 1), np.zeros(n))}

    if n > 1:
        ii, jj = np.triu_indices(n, k=1)
        evals = 0.5 * dcond
        keep = evals <= r_max
        edges = np.column_stack([ii[keep], jj[keep]]).astype(np.int32)
        by_dim[1] = _sort_simplices(edges, evals[keep])

    lazy = ()
    if n > 2:
        tri_idx, tri_val = _core.cech_triangle_values(
            np.ascontiguousarray(dcond), n, float(r_max)
        )
        if len(tri_val) > _LAZY_SORT_THRESHOLD:
            by_dim[2] = (tri_idx, tri_val)  # sorted lazily; H1 path prunes first
            lazy = (2,)
        else:
            by_dim[2] = _sort_simplices(tri_idx, tri_val)

    if q_max == 2 and n > 3:
        by_dim[3] = _sort_simplices(*_cech_tetrahedra(pts, dcond, n, r_max))

    fc = FilteredComplex(n, "cech", q_max, r_max, by_dim, unsorted_dims=lazy)
    fc._dists = squareform(dcond) if n > 1 else np.zeros((1, 1))
    return fc


def _cech_tetrahedra(pts, dcond, n, r_max):
    quad_idx = []
    quad_val = []
    for quad in combinations(range(n), 4):
        v = _tetra_value(pts, dcond, n, quad)
        if v <= r_max:
            quad_idx.append(quad)
            quad_val.append(v)
    if not quad_idx:
        return np.empty((0, 4), dtype=np.int32), np.empty(0)
    return np.asarray(quad_idx, dtype=np.int32), np.asarray(quad_val)


def _tetra_value(pts, dcond, n, quad):
    # Enclosing-ball radius of four points.  If the largest face ball covers
    # its opposite vertex the value ties that face's stored value exactly;
    # otherwise the circumsphere of the four points carries the support.
    faces = [(quad[a], quad[b], quad[c], quad[d])
             for a, b, c, d in ((0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 3, 1), (1, 2, 3, 0))]
    vals = []
    for i, j, k, opp in faces:
        a = dcond[_condensed_index(i, j, n)]
        b = dcond[_condensed_index(i, k, n)]
        c = dcond[_condensed_index(j, k, n)]
        vals.append((_triangle_radius_scalar(a, b, c), (i, j, k), opp))
    vals.sort(key=lambda t: -t[0])
    vmax = vals[0][0]
    for v, face, opp in vals:
        if v < vmax:
            break
        center, _ = _miniball_support(pts[list(face)])
        if np.linalg.norm(pts[opp] - center) <= v * (1.0 + 1e-9) + 1e-300:
            return v
    center = _circumcenter(pts[list(quad)])
    if center is None:
        return vmax
    return max(float(np.linalg.norm(pts[quad[0]] - center)), vmax)


def _triangle_radius_scalar(a, b, c):
    # same arithmetic as the backend kernels (keeps face/coface ties exact)
    a2, b2, c2 = a * a, b * b, c * c
    dmax = max(a, b, c)
    if 2.0 * dmax * dmax >= a2 + b2 + c2:
        return 0.5 * dmax
    area16 = 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2)
    return max((a * b * c) / np.sqrt(max(area16, 1e-300)), 0.5 * dmax)


def build_rips(X, q_max=1, r_max=None) -> FilteredComplex:
    """Rips filtration: simplex value is half its diameter (edges at d <= 2a)."""
    X = as_cloud(X)
    if q_max < 0:
        raise PdkernelError("q_max must be nonnegative")
    n = X.n_points
    dcond = pdist(X.points) if n > 1 else np.empty(0)
    if r_max is None:
        r_max = float(dcond.max()) / 2.0 if n > 1 else 0.0
    elif r_max <= 0 and n > 1:
        raise PdkernelError("r_max must be positive")

    by_dim = {0: (np.arange(n, dtype=np.int32).reshape(-1, 1), np.zeros(n))}
    for dim in range(1, q_max + 2):
        if n < dim + 1:
            break
        idx = np.array(list(combinations(range(n), dim + 1)), dtype=np.int32)
        vals = np.zeros(len(idx))
        for a, b in combinations(range(dim + 1), 2):
            vals = np.maximum(vals, 0.5 * dcond[_condensed_index(idx[:, a].astype(np.int64),
                                                                 idx[:, b].astype(np.int64), n)])
        keep = vals <= r_max
        if not np.any(keep):
            break
        by_dim[dim] = _sort_simplices(idx[keep], vals[keep])
    fc = FilteredComplex(n, "rips", q_max, r_max, by_dim)
    fc._dists = squareform(dcond) if n > 1 else np.zeros((1, 1))
    return fc


# ---------------------------------------------------------------------------
# minimal enclosing balls (exact support of <= d+1 points)

def _circumcenter(pts):
    """Circumcenter of 2..4 affinely independent points; None if degenerate."""
    a = pts[0]
    U = pts[1:] - a
    G = U @ U.T
    rhs = 0.5 * np.einsum("ij,ij->i", U, U)
    try:
        sol = np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(sol)):
        return None
    # reject nearly-degenerate systems that solve() lets through
    if np.linalg.cond(G) > 1e14:
        return None
    return a + sol @ U


def _miniball_support(pts):
    """Exact minimal enclosing ball of at most 4 points: (center, radius)."""
    pts = np.asarray(pts, dtype=np.float64)
    m = len(pts)
    if m == 0:
        return np.zeros(1), 0.0
    if m == 1:
        return pts[0].copy(), 0.0
    best = None
    for k in (2, 3, 4):
        if k > m:
            break
        for sub in combinations(range(m), k):
            sup = pts[list(sub)]
            if k == 2:
                c = 0.5 * (sup[0] + sup[1])
            else:
                c = _circumcenter(sup)
                if c is None:
                    continue
            r = float(np.max(np.linalg.norm(sup - c, axis=1)))
            if np.all(np.linalg.norm(pts - c, axis=1) <= r * (1 + _EPS) + 1e-300):
                if best is None or r < best[1]:
                    best = (c, r)
        if best is not None:
            return best
    # numerically degenerate input; fall back to the centroid bound
    c = pts.mean(axis=0)
    return c, float(np.max(np.linalg.norm(pts - c, axis=1)))


def miniball(X, seed=0):
    """Minimal enclosing ball of a cloud: (center, radius).

    Incremental Welzl-style construction over a shuffled point order; the
    support never exceeds d + 1 points, each solved in closed form.
    """
    pts = as_cloud(X).points
    rng = np.random.Generator(np.random.Philox(seed))
    order = rng.permutation(len(pts))
    P = pts[order]

    def covers(c, r, p):
        return np.linalg.norm(p - c) <= r * (1 + _EPS) + 1e-300

    def mb_with(P, boundary):
        c, r = _miniball_support(np.asarray(boundary))
        if len(boundary) == 4:
            return c, r
        for i in range(len(P)):
            if not covers(c, r, P[i]):
                c, r = mb_with(P[:i], boundary + [P[i]])
        return c, r

    return mb_with(P, [])
