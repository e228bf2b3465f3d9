"""Kernel machines operating on precomputed Gram matrices.

The change-point statistic whitens the difference of segment means by the
regularized pooled covariance, evaluated entirely in the span of the n
kernel sections via a Woodbury identity on an n x n system.  KPCA is the
usual double-centered eigendecomposition.  The SVM is a dual SMO solver with
maximal-violating-pair selection, written for precomputed kernels at desk
scale.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PdkernelError
from .kernels import GramMatrix, gram


def _gram_values(G):
    if isinstance(G, GramMatrix):
        return np.asarray(G.values, dtype=np.float64)
    return np.asarray(G, dtype=np.float64)


# ---------------------------------------------------------------------------
# change-point detection

@dataclass
class KfdrCurve:
    """Regularized kernel Fisher discriminant ratio per split 1 <= l <= n-1."""

    values: np.ndarray
    gamma: float

    @property
    def argmax(self):
        """The split l achieving the maximum (1-based)."""
        return int(np.argmax(self.values)) + 1


def _block_center(x, n1):
    y = x.copy()
    y[:n1] -= y[:n1].mean(axis=0)
    y[n1:] -= y[n1:].mean(axis=0)
    return y


def kfdr_split(G, ell, gamma) -> float:
    """KFDR value for one split, computed in the sample span.

    With W = blockdiag(H1, H2)/n the pooled covariance is S = Phi W Phi^T and
    W^(1/2) = sqrt(n) W; Woodbury turns (S + gamma I)^(-1) into an n x n
    solve against gamma I + W^(1/2) G W^(1/2).
    """
    G = _gram_values(G)
    n = G.shape[0]
    n1, n2 = ell, n - ell
    b = np.concatenate([np.full(n1, -1.0 / n1), np.full(n2, 1.0 / n2)])
    Gb = G @ b
    sqn = np.sqrt(n)
    WhGb = _block_center(Gb, n1) / sqn
    K = _block_center(_block_center(G, n1).T, n1).T / n  # W^(1/2) G W^(1/2)
    Msys = K + gamma * np.eye(n)
    sol = np.linalg.solve(Msys, WhGb)
    quad = (b @ Gb - WhGb @ sol) / gamma
    return float(max(quad, 0.0) * (n1 * n2 / n))


def kfdr_curve(G, gamma=1e-3) -> KfdrCurve:
    G = _gram_values(G)
    n = G.shape[0]
    if n < 3:
        raise PdkernelError("KFDR needs at least 3 samples")
    if not gamma > 0:
        raise PdkernelError("KFDR needs gamma > 0")
    values = np.array([kfdr_split(G, ell, gamma) for ell in range(1, n)])
    return KfdrCurve(values, float(gamma))


# ---------------------------------------------------------------------------
# kernel PCA

@dataclass
class KpcaEmbedding:
    coordinates: np.ndarray   # (n, k) principal scores
    eigenvalues: np.ndarray   # (k,) descending
    contribution: np.ndarray  # (k,) cumulative explained-variance ratios


def kpca(G, k) -> KpcaEmbedding:
    G = _gram_values(G)
    n = G.shape[0]
    if not 1 <= k < n:
        raise PdkernelError(f"kpca needs 1 <= k < n, got k={k}, n={n}")
    H = np.eye(n) - np.ones((n, n)) / n
    Gc = H @ G @ H
    Gc = (Gc + Gc.T) / 2.0
    evals, evecs = np.linalg.eigh(Gc)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    # eigenvalues at round-off scale count as zero variance (centering null)
    floor = 1e-12 * max(np.trace(Gc), 0.0)
    positive = np.where(evals > floor, evals, 0.0)
    total = positive.sum()
    lam = positive[:k]
    scores = evecs[:, :k] * np.sqrt(lam)[None, :]
    contrib = np.cumsum(lam) / total if total > 0 else np.zeros(k)
    return KpcaEmbedding(scores, lam, contrib)


# ---------------------------------------------------------------------------
# support vector machine (precomputed kernel)

@dataclass
class SvmModel:
    alpha: np.ndarray
    bias: float
    labels: np.ndarray
    support: np.ndarray  # indices with alpha > 0
    C: float

    def decision(self, K_cross):
        """Decision values for rows of a (n_test, n_train) kernel block."""
        return K_cross @ (self.alpha * self.labels) + self.bias


def _psd_clip(K):
    evals, evecs = np.linalg.eigh((K + K.T) / 2.0)
    return (evecs * np.maximum(evals, 0.0)) @ evecs.T


def svm_train(G, labels, C_svm, tol=1e-6, max_iter=200000) -> SvmModel:
    """C-SVM dual via SMO with maximal-violating-pair selection."""
    K = _gram_values(G)
    if isinstance(G, GramMatrix) and G.mode == "rff":
        K = _psd_clip(K)  # Monte-Carlo noise can leave small negative modes
    y = np.asarray(labels, dtype=np.float64)
    n = len(y)
    if K.shape != (n, n):
        raise PdkernelError("Gram size does not match label count")
    if not np.all(np.isfinite(K)):
        raise PdkernelError("Gram matrix contains non-finite entries")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise PdkernelError("labels must be -1 or +1")
    if len(np.unique(y)) < 2:
        raise PdkernelError("SVM needs both classes present")
    if not C_svm > 0:
        raise PdkernelError("C must be positive")

    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 0.5 a'Qa - e'a with Q = yy' * K
    for _ in range(max_iter):
        yg = -y * grad
        up = ((y > 0) & (alpha < C_svm)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C_svm)) | ((y > 0) & (alpha > 0))
        if not up.any() or not low.any():
            break
        i = np.flatnonzero(up)[np.argmax(yg[up])]
        j = np.flatnonzero(low)[np.argmin(yg[low])]
        m_up, m_low = yg[i], yg[j]
        if m_up - m_low <= tol:
            break
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        eta = max(eta, 1e-12)
        # E_t = (decision without bias) - y_t equals y_t * grad_t
        delta = (y[i] * grad[i] - y[j] * grad[j]) / eta
        aj_new = alpha[j] + y[j] * delta
        s = y[i] * y[j]
        if s < 0:
            L, H = max(0.0, alpha[j] - alpha[i]), min(C_svm, C_svm + alpha[j] - alpha[i])
        else:
            L, H = max(0.0, alpha[i] + alpha[j] - C_svm), min(C_svm, alpha[i] + alpha[j])
        aj_new = min(max(aj_new, L), H)
        ai_new = alpha[i] + s * (alpha[j] - aj_new)
        d_i, d_j = ai_new - alpha[i], aj_new - alpha[j]
        if abs(d_i) < 1e-15 and abs(d_j) < 1e-15:
            break
        grad += (y * y[i] * K[:, i]) * d_i + (y * y[j] * K[:, j]) * d_j
        alpha[i], alpha[j] = ai_new, aj_new

    yg = -y * grad
    free = (alpha > 1e-10) & (alpha < C_svm - 1e-10)
    if free.any():
        bias = float(yg[free].mean())
    else:
        up = ((y > 0) & (alpha < C_svm)) | ((y < 0) & (alpha > 0))
        low = ((y < 0) & (alpha < C_svm)) | ((y > 0) & (alpha > 0))
        hi = yg[up].max() if up.any() else 0.0
        lo = yg[low].min() if low.any() else 0.0
        bias = float((hi + lo) / 2.0)
    support = np.flatnonzero(alpha > 1e-10)
    return SvmModel(alpha, bias, y, support, float(C_svm))


def svm_predict(model: SvmModel, K_cross) -> np.ndarray:
    """Predicted labels (+-1) for rows of a (n_test, n_train) kernel block."""
    d = model.decision(np.asarray(K_cross, dtype=np.float64))
    out = np.where(d >= 0, 1.0, -1.0)
    return out.astype(int)


def dual_objective(model: SvmModel, G) -> float:
    """e'a - 0.5 a'Qa at the trained point (for solver cross-checks)."""
    K = _gram_values(G)
    a, y = model.alpha, model.labels
    return float(a.sum() - 0.5 * (a * y) @ K @ (a * y))


# ---------------------------------------------------------------------------
# cross-validation

def stratified_folds(labels, folds, seed):
    """Deterministic stratified fold assignment (array of fold ids)."""
    y = np.asarray(labels)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    assign = np.empty(len(y), dtype=np.int64)
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        idx = idx[rng.permutation(len(idx))]
        assign[idx] = np.arange(len(idx)) % folds
    return assign


def cross_validate(diagrams, labels, candidates, folds=10, seed=0):
    """Grid search over (KernelSpec, C_svm) pairs by stratified k-fold CV.

    Grams are computed once per distinct spec and sliced per fold.  Returns
    (best_spec, best_C, best_mean_accuracy); ties go to the earlier
    candidate.
    """
    if folds < 2:
        raise PdkernelError("need at least 2 folds")
    y = np.asarray(labels, dtype=np.float64)
    assign = stratified_folds(y, folds, seed)
    gram_cache = []  # (spec, values) with identity lookup
    best = None
    for spec, C_svm in candidates:
        values = None
        for s, v in gram_cache:
            if s is spec:
                values = v
                break
        if values is None:
            values = gram(diagrams, spec).values
            gram_cache.append((spec, values))
        accs = []
        for f in range(folds):
            te = assign == f
            tr = ~te
            if len(np.unique(y[tr])) < 2 or not te.any():
                continue
            model = svm_train(values[np.ix_(tr, tr)], y[tr], C_svm)
            pred = svm_predict(model, values[np.ix_(te, tr)])
            accs.append(float((pred == y[te]).mean()))
        mean_acc = float(np.mean(accs)) if accs else 0.0
        if best is None or mean_acc > best[2]:
            best = (spec, C_svm, mean_acc)
    return best
