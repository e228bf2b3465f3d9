"""Pure NumPy reference implementations of the hot kernels.

This backend is selected when the compiled extension is unavailable (or when
``PDKERNEL_PURE_PYTHON=1``).  It is algorithmically identical to the compiled
core and is used as its equivalence oracle in the test suite; it is adequate
for desk-scale inputs but markedly slower on large filtrations.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def _cidx(i, j, n):
    # index into a condensed distance matrix, i < j
    return i * n - (i * (i + 1)) // 2 + (j - i - 1)


def cech_triangle_values(dcond, n, r_max):
    """All triangles (i<j<k) with minimal-enclosing-ball radius <= r_max.

    ``dcond`` is the condensed pairwise distance matrix.  The radius is
    computed from the three side lengths alone: half the longest edge for
    obtuse triples, the circumradius otherwise.  The obtuse branch reuses the
    stored edge distance so that instant (birth == death) pairs tie exactly.

    Returns ``(idx, val)`` with ``idx`` of shape (T, 3) in enumeration order.
    """
    dcond = np.asarray(dcond, dtype=np.float64)
    idx_chunks = []
    val_chunks = []
    for i in range(n - 2):
        m = n - i - 1  # points i+1 .. n-1
        jj, kk = np.triu_indices(m, k=1)
        jj = jj + i + 1
        kk = kk + i + 1
        a = dcond[_cidx(i, jj, n)]
        b = dcond[_cidx(i, kk, n)]
        c = dcond[_cidx(jj, kk, n)]
        val = _triangle_radius(a, b, c)
        keep = val <= r_max
        if not np.any(keep):
            continue
        tri = np.empty((int(keep.sum()), 3), dtype=np.int32)
        tri[:, 0] = i
        tri[:, 1] = jj[keep]
        tri[:, 2] = kk[keep]
        idx_chunks.append(tri)
        val_chunks.append(val[keep])
    if not idx_chunks:
        return np.empty((0, 3), dtype=np.int32), np.empty(0, dtype=np.float64)
    return np.concatenate(idx_chunks), np.concatenate(val_chunks)


def _triangle_radius(a, b, c):
    a2, b2, c2 = a * a, b * b, c * c
    dmax = np.maximum(a, np.maximum(b, c))
    obtuse = 2.0 * dmax * dmax >= a2 + b2 + c2
    # 16 * area^2, non-negative up to round-off
    area16 = 2.0 * (a2 * b2 + b2 * c2 + c2 * a2) - (a2 * a2 + b2 * b2 + c2 * c2)
    with np.errstate(divide="ignore", invalid="ignore"):
        circ = (a * b * c) / np.sqrt(np.maximum(area16, 1e-300))
    val = np.where(obtuse, 0.5 * dmax, np.maximum(circ, 0.5 * dmax))
    return val


def prune_redundant_triangles(D, tri_idx, tri_val, nn, kind):
    """Mask of triangles that provably reduce to zero in the 2-boundary block.

    A triangle T = (i,j,k) is redundant if for some apex v (one of the two
    nearest neighbours of one of its vertices, ``nn`` of shape (n, 2)) the
    three fan triangles (v,i,j), (v,i,k), (v,j,k) all precede T in
    filtration order (value, then vertex lexicographic): then dT is the
    mod-2 sum of earlier columns, so T can never be a death and dropping it
    leaves the H1 pairing unchanged.  ``kind`` selects the fan value rule:
    0 Cech (miniball radius), 1 Rips (half max edge).  Returns keep: uint8.
    """
    D = np.asarray(D)
    n = D.shape[0]
    T = len(tri_val)
    i, j, k = tri_idx[:, 0].astype(np.int64), tri_idx[:, 1].astype(np.int64), tri_idx[:, 2].astype(np.int64)
    key_T = (i * n + j) * n + k
    keep = np.ones(T, dtype=np.uint8)
    undecided = np.arange(T)
    for cand in range(6):
        if len(undecided) == 0:
            break
        ii, jj, kk = i[undecided], j[undecided], k[undecided]
        v = nn[tri_idx[undecided, cand % 3], cand // 3].astype(np.int64)
        valid = (v != ii) & (v != jj) & (v != kk)
        ok = valid.copy()
        for (x, y) in ((ii, jj), (ii, kk), (jj, kk)):
            if kind == 0:
                fv = _triangle_radius(D[v, x], D[v, y], D[x, y])
            else:
                fv = 0.5 * np.maximum(D[v, x], np.maximum(D[v, y], D[x, y]))
            a = np.minimum(np.minimum(v, x), y)
            c = np.maximum(np.maximum(v, x), y)
            b = v + x + y - a - c
            fkey = (a * n + b) * n + c
            tv = tri_val[undecided]
            tk = key_T[undecided]
            ok &= (fv < tv) | ((fv == tv) & (fkey < tk))
        keep[undecided[ok]] = 0
        undecided = undecided[~ok]
    return keep


def reduce_z2(col_ptr, col_rows, n_rows, skip=None):
    """Column reduction of a Z/2 boundary matrix in filtration order.

    Columns are given in CSC form (rows sorted ascending) and must be ordered
    by filtration position; rows use the facet dimension's own filtration
    positions.  Returns ``pivot`` with, per column, the pivot row (a
    birth/death pairing), -1 for a zero column (a creator) or -2 if skipped
    via the clearing mask.
    """
    n_cols = len(col_ptr) - 1
    pivot = np.full(n_cols, -1, dtype=np.int64)
    owner = {}  # pivot row -> reduced column bitmask
    for j in range(n_cols):
        if skip is not None and skip[j]:
            pivot[j] = -2
            continue
        mask = 0
        for r in col_rows[col_ptr[j]:col_ptr[j + 1]]:
            mask |= 1 << int(r)
        while mask:
            piv = mask.bit_length() - 1
            got = owner.get(piv)
            if got is None:
                owner[piv] = mask
                pivot[j] = piv
                break
            mask ^= got
    return pivot


def anti_transpose(col_ptr, col_rows, n_rows):
    """Anti-transpose of a CSC boundary block.

    Entry (r, c) maps to (n_cols-1-c, n_rows-1-r); reducing the result pairs
    the same simplices as reducing the original (persistence duality), with
    far better column behaviour on clique-like complexes.  Returns the CSC of
    the anti-transposed block, whose rows range over the original columns.
    """
    col_ptr = np.asarray(col_ptr, dtype=np.int64)
    col_rows = np.asarray(col_rows)
    n_cols = len(col_ptr) - 1
    old_col = np.repeat(np.arange(n_cols, dtype=np.int64), np.diff(col_ptr))
    # reversed entry order makes old_col descending; a stable sort on the new
    # column key then yields rows sorted ascending within each new column
    new_col_key = (n_rows - 1) - col_rows[::-1]
    order = np.argsort(new_col_key, kind="stable")
    new_rows = ((n_cols - 1) - old_col[::-1][order]).astype(np.int32)
    counts = np.bincount(new_col_key, minlength=n_rows) if len(col_rows) else np.zeros(n_rows, dtype=np.int64)
    new_ptr = np.zeros(n_rows + 1, dtype=np.int64)
    np.cumsum(counts, out=new_ptr[1:])
    return new_ptr, np.ascontiguousarray(new_rows)


def merge_edges(edges, n_vertices):
    """Union-find over edges in filtration order.

    Returns a uint8 mask: 1 where the edge merges two components (an H0
    death), 0 where it closes a cycle (an H1 creator).
    """
    parent = list(range(n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = np.zeros(len(edges), dtype=np.uint8)
    for t in range(len(edges)):
        a = find(int(edges[t, 0]))
        b = find(int(edges[t, 1]))
        if a != b:
            if a < b:
                parent[b] = a
            else:
                parent[a] = b
            out[t] = 1
    return out


def weighted_gaussian_cross(A, B, wa, wb, inv_two_sigma2):
    """sum_ij wa_i wb_j exp(-||A_i - B_j||^2 / (2 sigma^2))."""
    if len(A) == 0 or len(B) == 0:
        return 0.0
    diff = A[:, None, :] - B[None, :, :]
    sq = np.einsum("ijk,ijk->ij", diff, diff)
    return float(wa @ np.exp(-inv_two_sigma2 * sq) @ wb)


def weighted_gaussian_gram(P, w, off, inv_two_sigma2):
    n = len(off) - 1
    G = np.empty((n, n), dtype=np.float64)
    for i in range(n):
        Ai = P[off[i]:off[i + 1]]
        wi = w[off[i]:off[i + 1]]
        for j in range(i, n):
            v = weighted_gaussian_cross(
                Ai, P[off[j]:off[j + 1]], wi, w[off[j]:off[j + 1]], inv_two_sigma2
            )
            G[i, j] = v
            G[j, i] = v
    return G


def weighted_gaussian_cross_gram(PA, wa, offa, PB, wb, offb, inv_two_sigma2):
    na = len(offa) - 1
    nb = len(offb) - 1
    G = np.empty((na, nb), dtype=np.float64)
    for i in range(na):
        for j in range(nb):
            G[i, j] = weighted_gaussian_cross(
                PA[offa[i]:offa[i + 1]],
                PB[offb[j]:offb[j + 1]],
                wa[offa[i]:offa[i + 1]],
                wb[offb[j]:offb[j + 1]],
                inv_two_sigma2,
            )
    return G


def rff_features(P, w, off, Z):
    """Per-diagram complex feature vectors B[l, a] = sum_x w(x) exp(i z_a . x)."""
    n = len(off) - 1
    M = Z.shape[0]
    out = np.zeros((n, M), dtype=np.complex128)
    if len(P):
        phases = P @ Z.T  # (m, M)
        C = np.exp(1j * phases)
        C *= w[:, None]
        for ell in range(n):
            lo, hi = off[ell], off[ell + 1]
            if hi > lo:
                out[ell] = C[lo:hi].sum(axis=0)
    return out
