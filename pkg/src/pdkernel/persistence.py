"""Persistence diagrams via Z/2 boundary-matrix column reduction.

The reduction runs one dimension at a time in filtration order, using the
twist optimization: columns of simplices already paired as births by the
next dimension up are cleared instead of reduced.  The single infinite
connected component is removed (reduced diagram); any other class that
survives the truncation radius raises ``EssentialClassAboveRmax``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import EssentialClassAboveRmax, PdkernelError
from .filtration import FilteredComplex, build_cech, build_rips


@dataclass
class PersistenceDiagram:
    """Finite multiset of (birth, death) pairs, birth < death, one dimension."""

    q: int
    pairs: np.ndarray  # (n, 2) float64, sorted by (birth, death)

    def __post_init__(self):
        self.pairs = np.asarray(self.pairs, dtype=np.float64).reshape(-1, 2)

    def __len__(self):
        return self.pairs.shape[0]

    @property
    def births(self):
        return self.pairs[:, 0]

    @property
    def deaths(self):
        return self.pairs[:, 1]

    def persistences(self):
        return self.pairs[:, 1] - self.pairs[:, 0]

    def union(self, other):
        """Multiset union (dimensions must agree)."""
        if self.q != other.q:
            raise PdkernelError("cannot union diagrams of different dimension")
        return diagram(self.q, np.vstack([self.pairs, other.pairs]))


def diagram(q, pairs) -> PersistenceDiagram:
    """Construct a diagram, validating b < d and sorting pairs."""
    pairs = np.asarray(pairs, dtype=np.float64).reshape(-1, 2)
    if len(pairs):
        if not np.all(np.isfinite(pairs)):
            raise PdkernelError("diagram contains non-finite values")
        if not np.all(pairs[:, 0] < pairs[:, 1]):
            raise PdkernelError("diagram contains pairs with birth >= death")
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
    return PersistenceDiagram(q, pairs)


@dataclass
class ReductionTranscript:
    """Pairing of the reduction in global filtration positions."""

    pairing: list = field(default_factory=list)   # (birth simplex, death simplex)
    essential: list = field(default_factory=list)


def _pack_keys(verts, n):
    keys = verts[:, 0].astype(np.int64)
    for c in range(1, verts.shape[1]):
        keys = keys * n + verts[:, c]
    return keys


def _boundary_columns(fc: FilteredComplex, dim, col_verts=None):
    """CSC boundary of the dim-simplices over (dim-1)-simplex positions."""
    verts = fc.vertex_arrays(dim) if col_verts is None else col_verts
    S, w = verts.shape
    if S == 0:
        return (np.zeros(1, dtype=np.int64), np.empty(0, dtype=np.int32), fc.n_simplices(dim - 1))
    sub = fc.vertex_arrays(dim - 1)
    n_rows = sub.shape[0]
    if dim == 1:
        cols = verts.astype(np.int32)  # vertex order is the identity
    else:
        keys_sub = _pack_keys(sub, fc.n_vertices)
        sorter = np.argsort(keys_sub)
        keys_sorted = keys_sub[sorter]
        cols = np.empty((S, w), dtype=np.int32)
        for drop in range(w):
            fkeys = _pack_keys(np.delete(verts, drop, axis=1), fc.n_vertices)
            pos = np.searchsorted(keys_sorted, fkeys)
            if np.any(pos >= n_rows) or np.any(keys_sorted[np.minimum(pos, n_rows - 1)] != fkeys):
                raise PdkernelError("complex is not closed under faces")
            cols[:, drop] = sorter[pos].astype(np.int32)
            del fkeys, pos
    cols.sort(axis=1)
    col_ptr = np.arange(S + 1, dtype=np.int64) * w
    return col_ptr, np.ascontiguousarray(cols.reshape(-1)), n_rows


def compute_persistence(fc: FilteredComplex, q, transcript=False):
    """Persistence diagram of H_q.

    Pairs (birth simplex, death simplex) come from the reduction of the
    (q+1)-boundary; zero-persistence pairs are dropped.  For q = 0 the single
    essential component is removed; any other essential class means the
    filtration was truncated too early and raises EssentialClassAboveRmax.
    """
    if q < 0 or q > fc.q_max:
        raise PdkernelError(f"q={q} outside the complex's range (q_max={fc.q_max})")
    if q == 0:
        return _persistence_h0(fc, transcript)

    # Reduce the anti-transposed (q+1)-boundary block: identical pairing by
    # persistence duality, but the cohomology orientation avoids the column
    # blow-up of the direct reduction on clique-like geometric complexes.
    # For q = 1 two further exact shortcuts apply on top: provably
    # zero-reducing triangles are dropped (fan-redundancy rule) and the
    # columns of component-merging edges, whose coboundaries always reduce
    # to zero, are cleared via union-find.
    merge = None
    skip_t = None
    if q == 1:
        up_verts, up_vals = _h1_block(fc)
        merge = np.asarray(
            _core.merge_edges(fc.vertex_arrays(1), fc.n_vertices)
        ).view(bool)
        skip_t = np.ascontiguousarray(merge[::-1], dtype=np.uint8)
    else:
        up_verts, up_vals = fc.vertex_arrays(q + 1), fc.values(q + 1)
    col_ptr, col_rows, n_q = _boundary_columns(fc, q + 1, up_verts)
    n_up = len(up_vals)
    at_ptr, at_rows = _core.anti_transpose(col_ptr, col_rows, n_q)
    del col_ptr, col_rows
    pivot_t = np.asarray(_core.reduce_z2(at_ptr, at_rows, n_up, skip_t))
    del at_ptr, at_rows

    vals_q = fc.values(q)
    paired_cols = np.flatnonzero(pivot_t >= 0)
    birth_idx = (n_q - 1) - paired_cols
    death_idx = (n_up - 1) - pivot_t[paired_cols]
    births = vals_q[birth_idx]
    deaths = up_vals[death_idx]
    positive = births < deaths
    pairs = np.column_stack([births[positive], deaths[positive]])

    is_death_row = np.zeros(max(n_q, fc.n_simplices(q)), dtype=bool)
    is_death_row[birth_idx] = True

    # creators of dimension q that stay unpaired are essential classes
    if q == 1:
        creators = ~merge
    else:
        skip = np.ascontiguousarray(is_death_row[: fc.n_simplices(q)], dtype=np.uint8)
        cp_q, cr_q, nr_q = _boundary_columns(fc, q)
        pivot_q = _core.reduce_z2(cp_q, cr_q, nr_q, skip)
        creators = pivot_q < 0  # -1 zero column, -2 cleared: both are creators
    essential_mask = creators & ~is_death_row[: fc.n_simplices(q)]
    if essential_mask.any():
        raise EssentialClassAboveRmax(
            f"{int(essential_mask.sum())} classes of H_{q} never die below "
            f"r_max={fc.r_max:.6g}; rebuild the filtration with a larger r_max"
        )

    dgm = diagram(q, pairs)
    if not transcript:
        return dgm
    return dgm, _build_transcript(fc, q, birth_idx, up_verts[death_idx], essential_mask)


def _persistence_h0(fc: FilteredComplex, transcript=False):
    """Reduced H_0 diagram: merge events via union-find in filtration order."""
    edges = fc.vertex_arrays(1)
    evals = fc.values(1)
    merge = np.asarray(_core.merge_edges(edges, fc.n_vertices)).view(bool)
    n_components = fc.n_vertices - int(merge.sum())
    if n_components > 1:
        raise EssentialClassAboveRmax(
            f"{n_components} connected components never merge below r_max={fc.r_max:.6g}"
        )
    deaths = evals[merge]
    deaths = deaths[deaths > 0.0]
    pairs = np.column_stack([np.zeros(len(deaths)), deaths])
    dgm = diagram(0, pairs)
    if not transcript:
        return dgm

    # elder rule by vertex index: the younger (larger) root dies at the merge
    parent = np.arange(fc.n_vertices)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    t = ReductionTranscript()
    order = fc.global_order()
    pos = {(dim, local): g for g, (dim, local) in enumerate(order)}
    for e in np.flatnonzero(merge):
        a, b = find(int(edges[e, 0])), find(int(edges[e, 1]))
        elder, young = (a, b) if a < b else (b, a)
        parent[young] = elder
        t.pairing.append((pos[(0, young)], pos[(1, int(e))]))
    t.pairing.sort()
    for v in range(fc.n_vertices):
        if find(v) == v:
            t.essential.append(pos[(0, v)])
    return dgm, t


_PRUNE_THRESHOLD = 20000


def _h1_block(fc):
    """Dim-2 column block for the H1 pairing, in filtration order.

    On large complexes, triangles whose columns provably reduce to zero are
    dropped before sorting (the fan-redundancy rule is order-free); the
    surviving subset is then sorted by (value, lexicographic vertices).
    """
    verts, vals = fc.raw_arrays(2)
    dists = getattr(fc, "_dists", None)
    if len(vals) <= _PRUNE_THRESHOLD or dists is None or fc.kind not in ("cech", "rips"):
        return fc.vertex_arrays(2), fc.values(2)
    d = dists.copy()
    np.fill_diagonal(d, np.inf)
    nn = np.argpartition(d, 2, axis=1)[:, :2].astype(np.int64)
    swap = d[np.arange(len(d)), nn[:, 0]] > d[np.arange(len(d)), nn[:, 1]]
    nn[swap] = nn[swap][:, ::-1]
    keep = _core.prune_redundant_triangles(
        np.ascontiguousarray(dists), verts, vals,
        np.ascontiguousarray(nn), 0 if fc.kind == "cech" else 1,
    )
    sel = keep.view(bool)
    verts, vals = verts[sel], vals[sel]
    order = np.argsort(vals, kind="stable")  # stored order is lex, so ties stay lex
    return np.ascontiguousarray(verts[order]), vals[order]


def _build_transcript(fc, q, birth_idx, death_verts, essential_mask):
    order = fc.global_order()
    pos = {}
    by_verts = {}
    for g, (dim, local) in enumerate(order):
        pos[(dim, local)] = g
        if dim == q + 1:
            by_verts[tuple(fc.vertex_arrays(dim)[local])] = g
    t = ReductionTranscript()
    for b, dv in zip(birth_idx, death_verts):
        t.pairing.append((pos[(q, int(b))], by_verts[tuple(dv)]))
    t.pairing.sort()
    for r in np.flatnonzero(essential_mask):
        t.essential.append(pos[(q, int(r))])
    return t


def total_persistence(D: PersistenceDiagram, p=1.0, t=0.0):
    """Degree-p total persistence over threshold t: sum of pers(x)^p, pers(x) > t."""
    if p < 1:
        raise PdkernelError("total persistence requires p >= 1")
    if t < 0:
        raise PdkernelError("total persistence requires t >= 0")
    pers = D.persistences()
    pers = pers[pers > t]
    return float(np.sum(pers ** p))


def cech_diagram(X, q=1, r_max=None, q_max=None) -> PersistenceDiagram:
    """Cech persistence diagram of a cloud (builds the complex and reduces)."""
    fc = build_cech(X, q_max=q_max if q_max is not None else max(q, 1), r_max=r_max)
    return compute_persistence(fc, q)


def rips_diagram(X, q=1, r_max=None, q_max=None) -> PersistenceDiagram:
    fc = build_rips(X, q_max=q_max if q_max is not None else max(q, 1), r_max=r_max)
    return compute_persistence(fc, q)
