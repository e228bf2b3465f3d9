"""The compiled core and the NumPy fallback must agree exactly."""
import numpy as np
import pytest

from pdkernel._core import _pyref

try:
    from pdkernel._core import _fast
except ImportError:
    _fast = None

needs_fast = pytest.mark.skipif(_fast is None, reason="compiled core not built")


def _random_csc(rng, n_rows, n_cols, max_nnz_col):
    cols = [np.sort(rng.choice(n_rows, size=rng.integers(0, min(max_nnz_col, n_rows) + 1),
                               replace=False)) for _ in range(n_cols)]
    ptr = np.zeros(n_cols + 1, np.int64)
    ptr[1:] = np.cumsum([len(c) for c in cols])
    rows = (np.concatenate(cols).astype(np.int32) if n_cols and ptr[-1]
            else np.empty(0, np.int32))
    return ptr, np.ascontiguousarray(rows)


@needs_fast
def test_triangle_values_match(rng):
    from scipy.spatial.distance import pdist
    for n in (3, 8, 20):
        pts = rng.random((n, 3))
        dcond = np.ascontiguousarray(pdist(pts))
        r_max = float(dcond.max())
        i1, v1 = _pyref.cech_triangle_values(dcond, n, r_max)
        i2, v2 = _fast.cech_triangle_values(dcond, n, r_max)
        assert np.array_equal(i1, i2)
        assert np.array_equal(v1, v2)  # bitwise: same arithmetic in both
        # truncation agrees too
        i1, v1 = _pyref.cech_triangle_values(dcond, n, 0.3 * r_max)
        i2, v2 = _fast.cech_triangle_values(dcond, n, 0.3 * r_max)
        assert np.array_equal(i1, i2) and np.array_equal(v1, v2)


@needs_fast
def test_reduce_and_anti_transpose_match(rng):
    for _ in range(60):
        n_rows = int(rng.integers(1, 40))
        n_cols = int(rng.integers(0, 50))
        ptr, rows = _random_csc(rng, n_rows, n_cols, 6)
        p1, r1 = _pyref.anti_transpose(ptr, rows, n_rows)
        p2, r2 = _fast.anti_transpose(ptr, rows, n_rows)
        assert np.array_equal(p1, p2) and np.array_equal(r1, r2)
        skip = rng.integers(0, 2, n_cols).astype(np.uint8) if rng.random() < 0.5 else None
        a = _pyref.reduce_z2(ptr, rows, n_rows, skip)
        b = _fast.reduce_z2(ptr, rows, n_rows, skip)
        assert np.array_equal(np.asarray(a), np.asarray(b))


@needs_fast
def test_merge_edges_match(rng):
    for _ in range(20):
        n = int(rng.integers(2, 30))
        m = int(rng.integers(1, 80))
        edges = np.sort(rng.integers(0, n, size=(m, 2)).astype(np.int32), axis=1)
        edges = edges[edges[:, 0] != edges[:, 1]]
        a = _pyref.merge_edges(edges, n)
        b = _fast.merge_edges(np.ascontiguousarray(edges), n)
        assert np.array_equal(np.asarray(a), np.asarray(b))


@needs_fast
def test_gaussian_sums_match(rng):
    A = rng.random((7, 2))
    B = rng.random((5, 2))
    wa, wb = rng.random(7), rng.random(5)
    x = _pyref.weighted_gaussian_cross(A, B, wa, wb, 0.7)
    y = _fast.weighted_gaussian_cross(np.ascontiguousarray(A), np.ascontiguousarray(B),
                                      wa, wb, 0.7)
    assert abs(x - y) < 1e-12 * (1 + abs(x))

    P = np.ascontiguousarray(rng.random((12, 2)))
    w = rng.random(12)
    off = np.array([0, 3, 3, 7, 12], dtype=np.int64)
    G1 = _pyref.weighted_gaussian_gram(P, w, off, 0.4)
    G2 = np.asarray(_fast.weighted_gaussian_gram(P, w, off, 0.4))
    assert np.allclose(G1, G2, atol=1e-14)
    C1 = _pyref.weighted_gaussian_cross_gram(P, w, off, P, w, off, 0.4)
    C2 = np.asarray(_fast.weighted_gaussian_cross_gram(P, w, off, P, w, off, 0.4))
    assert np.allclose(C1, C2, atol=1e-14)


@needs_fast
def test_rff_features_match(rng):
    P = np.ascontiguousarray(rng.random((9, 2)))
    w = rng.random(9)
    off = np.array([0, 0, 4, 9], dtype=np.int64)
    Z = np.ascontiguousarray(rng.normal(size=(16, 2)))
    B1 = _pyref.rff_features(P, w, off, Z)
    B2 = np.asarray(_fast.rff_features(P, w, off, Z))
    assert np.allclose(B1, B2, atol=1e-12)


@needs_fast
def test_prune_matches_and_is_sound(rng):
    from scipy.spatial.distance import pdist, squareform
    for _ in range(10):
        n = int(rng.integers(6, 18))
        pts = rng.random((n, 3))
        D = squareform(pdist(pts))
        tri = np.array([(i, j, k) for i in range(n) for j in range(i + 1, n)
                        for k in range(j + 1, n)], dtype=np.int32)
        a = D[tri[:, 0], tri[:, 1]]
        b = D[tri[:, 0], tri[:, 2]]
        c = D[tri[:, 1], tri[:, 2]]
        val = _pyref._triangle_radius(a, b, c)
        d2 = D.copy()
        np.fill_diagonal(d2, np.inf)
        nn = np.argpartition(d2, 2, axis=1)[:, :2].astype(np.int64)
        k1 = _pyref.prune_redundant_triangles(D, tri, val, nn, 0)
        k2 = np.asarray(_fast.prune_redundant_triangles(
            np.ascontiguousarray(D), np.ascontiguousarray(tri), val,
            np.ascontiguousarray(nn), 0))
        assert np.array_equal(k1, k2)
