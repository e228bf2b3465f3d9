"""Bottleneck and p-Wasserstein distances between persistence diagrams.

Both use the sup-norm ground metric and diagonal augmentation: every point
may be matched to its diagonal projection, and diagonal-to-diagonal matches
are free.  Bottleneck runs a binary search over candidate thresholds with a
bipartite perfect-matching feasibility test; Wasserstein solves one
minimum-cost assignment on the standard square augmented cost matrix.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import PdkernelError
from .persistence import PersistenceDiagram


def _pairs(D):
    if isinstance(D, PersistenceDiagram):
        return D.pairs
    return np.asarray(D, dtype=np.float64).reshape(-1, 2)


def _check_dims(D, E):
    if isinstance(D, PersistenceDiagram) and isinstance(E, PersistenceDiagram):
        if D.q != E.q:
            raise PdkernelError("diagrams have different homology dimension")


def _inf_costs(P, Q):
    if len(P) == 0 or len(Q) == 0:
        return np.zeros((len(P), len(Q)))
    return np.abs(P[:, None, :] - Q[None, :, :]).max(axis=2)


def _diag_gaps(P):
    # sup-norm distance to the diagonal: pers / 2
    return (P[:, 1] - P[:, 0]) / 2.0


def bottleneck_distance(D, E) -> float:
    """inf over multi-bijections of the largest sup-norm displacement."""
    _check_dims(D, E)
    P, Q = _pairs(D), _pairs(E)
    m1, m2 = len(P), len(Q)
    if m1 == 0 and m2 == 0:
        return 0.0
    cost = _inf_costs(P, Q)
    dp = _diag_gaps(P)
    dq = _diag_gaps(Q)
    candidates = np.unique(np.concatenate([[0.0], cost.ravel(), dp, dq]))

    def feasible(thr):
        # rows: P points then Q-diagonal slots; cols: Q points then P-diagonal
        rows = []
        cols = []
        if m1 and m2:
            r, c = np.nonzero(cost <= thr)
            rows.append(r)
            cols.append(c)
        r = np.flatnonzero(dp <= thr)
        rows.append(r)
        cols.append(m2 + r)
        c = np.flatnonzero(dq <= thr)
        rows.append(m1 + c)
        cols.append(c)
        # diagonal-to-diagonal is free
        dd_r, dd_c = np.meshgrid(m1 + np.arange(m2), m2 + np.arange(m1), indexing="ij")
        rows.append(dd_r.ravel())
        cols.append(dd_c.ravel())
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        n = m1 + m2
        graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        match = maximum_bipartite_matching(graph, perm_type="column")
        return int((match >= 0).sum()) == n

    lo, hi = 0, len(candidates) - 1
    best = candidates[-1]
    while lo <= hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            best = candidates[mid]
            hi = mid - 1
        else:
            lo = mid + 1
    return float(best)


def wasserstein_distance(D, E, p=1.0) -> float:
    """(min over multi-bijections of sum of sup-norm costs^p)^(1/p)."""
    _check_dims(D, E)
    if p < 1:
        raise PdkernelError("Wasserstein order must be >= 1")
    if np.isinf(p):
        return bottleneck_distance(D, E)
    P, Q = _pairs(D), _pairs(E)
    m1, m2 = len(P), len(Q)
    if m1 == 0 and m2 == 0:
        return 0.0
    n = m1 + m2
    C = np.zeros((n, n))
    if m1 and m2:
        C[:m1, :m2] = _inf_costs(P, Q) ** p
    C[:m1, m2:] = (_diag_gaps(P) ** p)[:, None]
    C[m1:, :m2] = (_diag_gaps(Q) ** p)[None, :]
    rows, cols = linear_sum_assignment(C)
    return float(C[rows, cols].sum() ** (1.0 / p))
