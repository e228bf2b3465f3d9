"""Kernels between persistence diagrams and their Gram matrices.

A diagram is embedded as the weighted sum of base-kernel sections; the inner
product of two embeddings is the (k,w)-linear kernel, and composing with a
Gaussian on the induced RKHS distance gives the (k,w)-Gaussian kernel.  The
scale-space kernel is the same construction on mirrored diagrams with signed
weights; landscape and image kernels are linear kernels on those vector
representations.  Gaussian-base Gram matrices can be approximated with shared
random Fourier features, turning the per-entry cost from quadratic to linear
in diagram size.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import pdist

from . import _core
from .errors import NumericalError, PdkernelError
from .persistence import PersistenceDiagram
from .vectorizers import (ArcWeight, OneWeight, PssSignWeight, WeightFn,
                          build_image, build_landscape, image_length,
                          landscape_inner)


def _pairs(D):
    if isinstance(D, PersistenceDiagram):
        return D.pairs
    return np.asarray(D, dtype=np.float64).reshape(-1, 2)


@dataclass(frozen=True)
class KernelSpec:
    """Declarative description of a diagram kernel.

    family: "kw" (weighted base-kernel embedding, includes the PWGK),
    "pssk", "pl" (landscape) or "pi" (image).  The outer layer is either the
    plain inner product or a Gaussian of the RKHS distance with width tau.
    """

    family: str = "kw"
    base: str = "gaussian"          # kw only: gaussian | linear
    sigma: float = 1.0              # gaussian base bandwidth
    weight: WeightFn = field(default_factory=OneWeight)
    outer: str = "linear"           # linear | gaussian
    tau: float = None
    t: float = None                 # pssk diffusion time
    grid_size: int = None           # pi resolution M
    length: float = None            # pi grid upper bound L
    sigma_img: float = None         # pi surface bandwidth

    def __post_init__(self):
        if self.family not in ("kw", "pssk", "pl", "pi"):
            raise PdkernelError(f"unknown kernel family {self.family!r}")
        if self.family == "kw" and self.base not in ("gaussian", "linear"):
            raise PdkernelError(f"unknown base kernel {self.base!r}")
        if self.outer not in ("linear", "gaussian"):
            raise PdkernelError(f"unknown outer layer {self.outer!r}")
        if self.family == "kw" and self.base == "gaussian" and not self.sigma > 0:
            raise PdkernelError("gaussian base needs sigma > 0")
        if self.family == "pssk" and (self.t is None or not self.t > 0):
            raise PdkernelError("PSSK needs t > 0")

    def describe(self):
        d = {"family": self.family, "outer": self.outer}
        if self.family == "kw":
            d["base"] = self.base
            if self.base == "gaussian":
                d["sigma"] = self.sigma
            d["weight"] = self.weight.describe()
        if self.outer == "gaussian":
            d["tau"] = self.tau
        if self.family == "pssk":
            d["t"] = self.t
        if self.family == "pi":
            d.update(grid_size=self.grid_size, length=self.length,
                     sigma_img=self.sigma_img, weight=self.weight.describe())
        return d


def pwgk_spec(sigma, C, p=5, tau=None, outer="gaussian") -> KernelSpec:
    """Persistence weighted Gaussian kernel: arctan weight, Gaussian base."""
    return KernelSpec(family="kw", base="gaussian", sigma=sigma,
                      weight=ArcWeight(C, p), outer=outer, tau=tau)


# ---------------------------------------------------------------------------
# single evaluations

def kw_linear(D, E, spec: KernelSpec) -> float:
    """sum_{x in D} sum_{y in E} w(x) w(y) k(x, y)."""
    P, Q = _pairs(D), _pairs(E)
    if len(P) == 0 or len(Q) == 0:
        return 0.0
    wp = spec.weight(P)
    wq = spec.weight(Q)
    if spec.base == "linear":
        return float((wp @ P) @ (wq @ Q))
    inv = 1.0 / (2.0 * spec.sigma ** 2)
    return float(_core.weighted_gaussian_cross(
        np.ascontiguousarray(P), np.ascontiguousarray(Q), wp, wq, inv))


def rkhs_distance(D, E, spec: KernelSpec) -> float:
    """Distance between the embedded diagrams in the base-kernel RKHS."""
    v = kw_linear(D, D, spec) + kw_linear(E, E, spec) - 2.0 * kw_linear(D, E, spec)
    return float(np.sqrt(max(v, 0.0)))


def kw_gaussian(D, E, spec: KernelSpec) -> float:
    """exp(-d_k(D, E)^2 / (2 tau^2)) with d_k the embedded-measure distance."""
    if spec.tau is None or not spec.tau > 0:
        raise NumericalError("outer Gaussian needs tau > 0 (did the median heuristic return 0?)")
    d = rkhs_distance(D, E, spec)
    return float(np.exp(-(d * d) / (2.0 * spec.tau ** 2)))


def mirror_diagram(D):
    """D with its reflection across the diagonal appended (multiset union)."""
    P = _pairs(D)
    return np.vstack([P, P[:, ::-1]])


def pssk(D, E, t) -> float:
    """Persistence scale-space kernel."""
    if not t > 0:
        raise PdkernelError("PSSK needs t > 0")
    P, Q = _pairs(D), _pairs(E)
    if len(P) == 0 or len(Q) == 0:
        return 0.0
    ones_p = np.ones(len(P))
    ones_q = np.ones(len(Q))
    inv = 1.0 / (8.0 * t)
    direct = _core.weighted_gaussian_cross(
        np.ascontiguousarray(P), np.ascontiguousarray(Q), ones_p, ones_q, inv)
    mirrored = _core.weighted_gaussian_cross(
        np.ascontiguousarray(P), np.ascontiguousarray(Q[:, ::-1]), ones_p, ones_q, inv)
    return float((direct - mirrored) / (8.0 * np.pi * t))


def pi_kernel(D, E, grid_size, length, sigma_img, weight: WeightFn) -> float:
    """Inner product of the two persistence-image vectors."""
    vd = build_image(D, grid_size, length, sigma_img, weight).to_vector()
    ve = build_image(E, grid_size, length, sigma_img, weight).to_vector()
    return float(vd @ ve)


# ---------------------------------------------------------------------------
# Gram matrices

@dataclass
class GramMatrix:
    values: np.ndarray
    spec: KernelSpec
    mode: str = "exact"            # exact | rff
    m_rff: int = None
    seed: int = None

    @property
    def n(self):
        return self.values.shape[0]


@dataclass
class RffFeatures:
    """Shared frequency sample and per-diagram complex feature vectors."""

    freqs: np.ndarray       # (M, 2) ~ N(0, sigma^-2 I)
    features: np.ndarray    # (n, M) complex, B[l, a] = sum_x w(x) e^{i z_a.x}
    sigma: float
    seed: int

    def linear_gram(self):
        """Approximate (k,w)-linear Gram: Re(B B*) / M."""
        M = self.freqs.shape[0]
        return (self.features @ self.features.conj().T).real / M


def rff_features(diagrams, weight: WeightFn, sigma, m_rff, seed) -> RffFeatures:
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    Z = rng.normal(0.0, 1.0 / sigma, size=(int(m_rff), 2))
    P, w, off = _flatten(diagrams, weight)
    B = _core.rff_features(P, w, off, np.ascontiguousarray(Z))
    return RffFeatures(Z, np.asarray(B), float(sigma), seed)


def _flatten(diagrams, weight: WeightFn):
    arrs = [_pairs(D) for D in diagrams]
    off = np.zeros(len(arrs) + 1, dtype=np.int64)
    np.cumsum([len(a) for a in arrs], out=off[1:])
    if off[-1] == 0:
        return np.zeros((0, 2)), np.zeros(0), off
    P = np.ascontiguousarray(np.vstack([a for a in arrs if len(a)]))
    w = np.concatenate([weight(a) for a in arrs if len(a)])
    return P, np.ascontiguousarray(w, dtype=np.float64), off

def _linear_gram_exact(diagrams, spec: KernelSpec):
    if spec.base == "linear":
        V = np.vstack([spec.weight(_pairs(D)) @ _pairs(D) if len(_pairs(D)) else np.zeros(2)
                       for D in diagrams])
        return V @ V.T
    P, w, off = _flatten(diagrams, spec.weight)
    inv = 1.0 / (2.0 * spec.sigma ** 2)
    return np.asarray(_core.weighted_gaussian_gram(P, w, off, inv))


def _linear_cross_exact(diagrams_a, diagrams_b, spec: KernelSpec):
    if spec.base == "linear":
        Va = np.vstack([spec.weight(_pairs(D)) @ _pairs(D) if len(_pairs(D)) else np.zeros(2)
                        for D in diagrams_a])
        Vb = np.vstack([spec.weight(_pairs(D)) @ _pairs(D) if len(_pairs(D)) else np.zeros(2)
                        for D in diagrams_b])
        return Va @ Vb.T
    Pa, wa, offa = _flatten(diagrams_a, spec.weight)
    Pb, wb, offb = _flatten(diagrams_b, spec.weight)
    inv = 1.0 / (2.0 * spec.sigma ** 2)
    return np.asarray(_core.weighted_gaussian_cross_gram(Pa, wa, offa, Pb, wb, offb, inv))


def _outer(linear_gram, spec: KernelSpec, diag_self=None):
    """Apply the outer layer to a linear Gram block.

    diag_self: (K(D,D) for rows, K(E,E) for cols) when the block is not
    square; defaults to the diagonal of a square block.
    """
    if spec.outer == "linear":
        return linear_gram
    if spec.tau is None or not spec.tau > 0:
        raise NumericalError("outer Gaussian needs tau > 0 (did the median heuristic return 0?)")
    if diag_self is None:
        diag = np.diag(linear_gram)
        d2 = diag[:, None] + diag[None, :] - 2.0 * linear_gram
    else:
        rows, cols = diag_self
        d2 = rows[:, None] + cols[None, :] - 2.0 * linear_gram
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-d2 / (2.0 * spec.tau ** 2))


def _pssk_as_kw(spec: KernelSpec) -> KernelSpec:
    # Eq.-level identity: PSSK(D, E; t) equals the (k,w)-linear kernel on
    # mirrored diagrams with the sign weight, base sigma^2 = 4t, scaled by
    # 1 / (16 pi t).
    return KernelSpec(family="kw", base="gaussian", sigma=2.0 * np.sqrt(spec.t),
                      weight=PssSignWeight(), outer="linear")


def _vector_gram(vectors):
    V = np.vstack(vectors)
    return V @ V.T


def _representation_vectors(diagrams, spec: KernelSpec):
    if spec.family == "pl":
        landscapes = [build_landscape(D) for D in diagrams]
        n = len(landscapes)
        G = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                G[i, j] = G[j, i] = landscape_inner(landscapes[i], landscapes[j])
        return G
    if spec.family == "pi":
        length = spec.length if spec.length is not None else image_length(diagrams)
        vecs = [build_image(D, spec.grid_size, length, spec.sigma_img, spec.weight).to_vector()
                for D in diagrams]
        return _vector_gram(vecs)
    raise PdkernelError(f"no vector representation for family {spec.family!r}")


def _linear_gram_any(diagrams, spec: KernelSpec):
    """Exact inner-product Gram of the kernel's underlying embedding."""
    if spec.family == "kw":
        return _linear_gram_exact(diagrams, spec)
    if spec.family == "pssk":
        return _linear_gram_exact([mirror_diagram(D) for D in diagrams],
                                  _pssk_as_kw(spec)) / (16.0 * np.pi * spec.t)
    return _representation_vectors(diagrams, spec)


def gram(diagrams, spec: KernelSpec, mode="exact", m_rff=None, seed=0) -> GramMatrix:
    """Gram matrix of a diagram collection under the given kernel.

    mode "exact" evaluates every entry; mode "rff" (Gaussian-base kw and
    PSSK) builds shared random Fourier features once and assembles the Gram
    from feature inner products, including the outer Gaussian layer, which is
    computed from the same approximate embeddings.
    """
    diagrams = list(diagrams)
    if len(diagrams) == 0:
        raise PdkernelError("need at least one diagram")
    if mode == "exact":
        values = _outer(_linear_gram_any(diagrams, spec), spec)
        return GramMatrix(values, spec, "exact")
    if mode != "rff":
        raise PdkernelError(f"unknown gram mode {mode!r}")
    if m_rff is None or m_rff < 1:
        raise PdkernelError("rff mode needs m_rff >= 1")
    if spec.family == "kw":
        if spec.base != "gaussian":
            raise PdkernelError("rff mode needs a Gaussian base kernel")
        feats = rff_features(diagrams, spec.weight, spec.sigma, m_rff, seed)
        lin = feats.linear_gram()
    elif spec.family == "pssk":
        kwspec = _pssk_as_kw(spec)
        feats = rff_features([mirror_diagram(D) for D in diagrams],
                             kwspec.weight, kwspec.sigma, m_rff, seed)
        lin = feats.linear_gram() / (16.0 * np.pi * spec.t)
    else:
        raise PdkernelError(f"family {spec.family!r} has no rff approximation")
    values = _outer(lin, spec)
    return GramMatrix(values, spec, "rff", int(m_rff), seed)


def cross_gram(diagrams_a, diagrams_b, spec: KernelSpec) -> np.ndarray:
    """Exact kernel block K(D_i, E_j) (rows: a, cols: b)."""
    if spec.family == "kw":
        lin = _linear_cross_exact(diagrams_a, diagrams_b, spec)
        if spec.outer == "linear":
            return lin
        rows = np.array([kw_linear(D, D, spec) for D in diagrams_a])
        cols = np.array([kw_linear(D, D, spec) for D in diagrams_b])
        return _outer(lin, spec, diag_self=(rows, cols))
    if spec.family == "pssk":
        kwspec = _pssk_as_kw(spec)
        ma = [mirror_diagram(D) for D in diagrams_a]
        mb = [mirror_diagram(D) for D in diagrams_b]
        lin = _linear_cross_exact(ma, mb, kwspec) / (16.0 * np.pi * spec.t)
        if spec.outer == "linear":
            return lin
        rows = np.array([kw_linear(D, D, kwspec) for D in ma]) / (16.0 * np.pi * spec.t)
        cols = np.array([kw_linear(D, D, kwspec) for D in mb]) / (16.0 * np.pi * spec.t)
        return _outer(lin, spec, diag_self=(rows, cols))
    # vector families: build the joint representation and slice
    if spec.family == "pi" and spec.length is None:
        spec = replace(spec, length=image_length(list(diagrams_a) + list(diagrams_b)))
    G = _representation_vectors(list(diagrams_a) + list(diagrams_b), spec)
    na = len(list(diagrams_a))
    lin = G[:na, na:]
    if spec.outer == "linear":
        return lin
    return _outer(lin, spec, diag_self=(np.diag(G)[:na], np.diag(G)[na:]))


# ---------------------------------------------------------------------------
# median heuristics

def median_sigma(diagrams) -> float:
    """Median over diagrams of the median pairwise point distance."""
    per = []
    for D in diagrams:
        P = _pairs(D)
        if len(P) >= 2:
            per.append(np.median(pdist(P)))
    if not per:
        raise NumericalError("median sigma needs a diagram with at least 2 points")
    return float(np.median(per))


def median_C(diagrams, p=5) -> float:
    """(median over diagrams of the median persistence)^(-p)."""
    per = []
    for D in diagrams:
        P = _pairs(D)
        if len(P):
            per.append(np.median(P[:, 1] - P[:, 0]))
    if not per:
        raise NumericalError("median C needs a nonempty diagram")
    med = float(np.median(per))
    if med <= 0:
        raise NumericalError("median persistence is zero")
    return float(med ** (-p))


def median_tau(diagrams, spec: KernelSpec) -> float:
    """Median RKHS distance over all diagram pairs (may be 0; caller guards)."""
    diagrams = list(diagrams)
    if len(diagrams) < 2:
        raise PdkernelError("median tau needs at least 2 diagrams")
    lin = _linear_gram_any(diagrams, spec)
    diag = np.diag(lin)
    d2 = diag[:, None] + diag[None, :] - 2.0 * lin
    iu = np.triu_indices(len(diagrams), k=1)
    return float(np.median(np.sqrt(np.maximum(d2[iu], 0.0))))


def pssk_median_t(diagrams) -> float:
    """Scale-space time from the median heuristic on mirrored diagrams."""
    sig = median_sigma([mirror_diagram(D) for D in diagrams])
    return float(sig ** 2 / 4.0)
