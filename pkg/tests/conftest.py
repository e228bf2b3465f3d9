"""Shared test helpers: independent oracles kept free of library internals."""
import itertools

import numpy as np
import pytest

from pdkernel.persistence import diagram


def random_diagram(rng, m, birth_scale=2.0, pers_scale=2.0, q=1):
    """Random diagram with m points, births U(0, birth_scale), pers U(0.05, pers_scale)."""
    b = rng.uniform(0.0, birth_scale, m)
    p = rng.uniform(0.05, pers_scale, m)
    return diagram(q, np.column_stack([b, b + p]))


def random_cloud(rng, n, d=3, box=1.0):
    return rng.uniform(0.0, box, size=(n, d))


# ---------------------------------------------------------------------------
# exhaustive matching oracles (diagrams of <= 4 points)

def _inf_dist(x, y):
    return max(abs(x[0] - y[0]), abs(x[1] - y[1]))


def _diag_gap(x):
    return (x[1] - x[0]) / 2.0


def _matchings(m1, m2):
    """All partial injective matchings between range(m1) and range(m2)."""
    for k in range(min(m1, m2) + 1):
        for sub_d in itertools.combinations(range(m1), k):
            for sub_e in itertools.permutations(range(m2), k):
                yield list(zip(sub_d, sub_e))


def brute_bottleneck(P, Q):
    P, Q = np.atleast_2d(P), np.atleast_2d(Q)
    m1, m2 = len(P), len(Q)
    best = np.inf
    for match in _matchings(m1, m2):
        used_d = {i for i, _ in match}
        used_e = {j for _, j in match}
        cost = 0.0
        for i, j in match:
            cost = max(cost, _inf_dist(P[i], Q[j]))
        for i in range(m1):
            if i not in used_d:
                cost = max(cost, _diag_gap(P[i]))
        for j in range(m2):
            if j not in used_e:
                cost = max(cost, _diag_gap(Q[j]))
        best = min(best, cost)
    return 0.0 if best is np.inf else best


def brute_wasserstein(P, Q, p):
    P, Q = np.atleast_2d(P), np.atleast_2d(Q)
    m1, m2 = len(P), len(Q)
    best = np.inf
    for match in _matchings(m1, m2):
        used_d = {i for i, _ in match}
        used_e = {j for _, j in match}
        cost = 0.0
        for i, j in match:
            cost += _inf_dist(P[i], Q[j]) ** p
        for i in range(m1):
            if i not in used_d:
                cost += _diag_gap(P[i]) ** p
        for j in range(m2):
            if j not in used_e:
                cost += _diag_gap(Q[j]) ** p
        best = min(best, cost)
    return best ** (1.0 / p)


# ---------------------------------------------------------------------------
# GF(2) homology rank oracle

def gf2_rank(M):
    """Rank of a 0/1 matrix over GF(2) by straightforward elimination."""
    A = (np.atleast_2d(M).astype(np.int64) % 2).copy()
    if A.size == 0:
        return 0
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if A[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        for r in range(rows):
            if r != rank and A[r, c]:
                A[r] ^= A[rank]
        rank += 1
    return rank


def boundary_matrix_at(fc, dim, a):
    """Dense GF(2) boundary of the dim-simplices present at parameter a."""
    sub = fc.vertex_arrays(dim - 1)
    sub_vals = fc.values(dim - 1)
    top = fc.vertex_arrays(dim)
    top_vals = fc.values(dim)
    rows = {tuple(v): i for i, v in enumerate(sub[sub_vals <= a])}
    cols = top[top_vals <= a]
    M = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, simplex in enumerate(cols):
        for drop in range(len(simplex)):
            face = tuple(np.delete(simplex, drop))
            M[rows[face], j] = 1
    return M


def betti_oracle(fc, q, a):
    """dim H_q of the subcomplex at parameter a, by GF(2) ranks."""
    n_q = int((fc.values(q) <= a).sum())
    if n_q == 0:
        return 0
    rank_dq = gf2_rank(boundary_matrix_at(fc, q, a)) if q > 0 else 0
    rank_dq1 = gf2_rank(boundary_matrix_at(fc, q + 1, a)) if q + 1 <= fc.max_dim else 0
    return n_q - rank_dq - rank_dq1


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
