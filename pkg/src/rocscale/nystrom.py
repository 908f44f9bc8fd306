"""Kernels, landmark selection and low-rank kernel feature maps.

The Nystrom map sends ``x`` to ``k(x, landmarks) @ M`` with
``M = (K_sel^+)^{1/2}``, the symmetric square root of the pseudo-inverse of the
landmark Gram matrix. With every training point as a landmark it reproduces
the kernel matrix exactly.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from .data import Dataset
from .errors import CapExceededError, DimensionError, EigError, InvalidRankError

DEFAULT_EXACT_CAP = 2000


class KernelKind(enum.Enum):
    LINEAR = "linear"
    RBF = "rbf"


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind = KernelKind.RBF
    gamma: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        if self.kind is KernelKind.RBF and not (self.gamma is not None and self.gamma > 0):
            raise ValueError("RBF kernel needs gamma > 0")

    @classmethod
    def rbf_default(cls, p: int) -> "KernelSpec":
        return cls(KernelKind.RBF, 1.0 / p)


def median_gamma(x, max_points: int = 1000, seed: int = 0) -> float:
    """``1 / median squared distance`` over (a subsample of) the rows of ``x``."""
    x = np.asarray(x, dtype=float)
    if x.shape[0] > max_points:
        x = x[np.random.default_rng(seed).choice(x.shape[0], max_points, replace=False)]
    d2 = _sq_dists(x, x)[np.triu_indices(x.shape[0], k=1)]
    med = float(np.median(d2)) if d2.size else 0.0
    return 1.0 / med if med > 0 else 1.0


def _sq_dists(a, b):
    # direct differences: identical rows give exactly 0, no cancellation
    return cdist(a, b, "sqeuclidean")


def kernel_matrix(a, b, spec: KernelSpec) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if a.shape[1] != b.shape[1]:
        raise DimensionError(f"feature dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    if spec.kind is KernelKind.LINEAR:
        return a @ b.T
    return np.exp(-spec.gamma * _sq_dists(a, b))


# ----------------------------------------------------------------- landmarks


class LandmarkKind(enum.Enum):
    UNIFORM = "uniform"
    STRATIFIED = "stratified"
    KMEANS = "kmeans"


@dataclass(frozen=True)
class LandmarkStrategy:
    kind: LandmarkKind = LandmarkKind.STRATIFIED
    d: int = 300
    seed: int = 0
    kmeans_iters: int = 25

    def __post_init__(self):
        object.__setattr__(self, "kind", LandmarkKind(self.kind))
        if self.d < 1:
            raise InvalidRankError("d must be at least 1")


def stratified_counts(n_pos: int, n_neg: int, d: int) -> tuple[int, int]:
    d_pos = -(-d * n_pos // (n_pos + n_neg))
    return d_pos, d - d_pos


def kmeans(x, k: int, rng, iters: int = 25) -> np.ndarray:
    """Lloyd's algorithm from a k-means++ start; returns the ``k`` centroids."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    closest = ((x - centers[0]) ** 2).sum(1)
    for c in range(1, k):
        total = closest.sum()
        if total > 0:
            idx = rng.choice(n, p=closest / total)
        else:
            idx = rng.integers(n)
        centers[c] = x[idx]
        closest = np.minimum(closest, ((x - centers[c]) ** 2).sum(1))
    for _ in range(iters):
        assign = np.argmin(_sq_dists(x, centers), axis=1)
        counts = np.bincount(assign, minlength=k)
        sums = np.zeros_like(centers)
        np.add.at(sums, assign, x)
        filled = counts > 0
        new = centers.copy()
        new[filled] = sums[filled] / counts[filled, None]
        if np.array_equal(new, centers):
            break
        centers = new
    return centers


def select_landmarks(dataset: Dataset, strategy: LandmarkStrategy) -> np.ndarray:
    d = strategy.d
    if d > dataset.n:
        raise InvalidRankError(f"d={d} exceeds the number of samples n={dataset.n}")
    rng = np.random.default_rng(strategy.seed)
    x = dataset.features
    if strategy.kind is LandmarkKind.UNIFORM:
        return x[rng.permutation(dataset.n)[:d]].copy()
    if strategy.kind is LandmarkKind.STRATIFIED:
        dataset.require_both_classes()
        d_pos, d_neg = stratified_counts(dataset.n_pos, dataset.n_neg, d)
        pos = rng.permutation(dataset.pos_idx)[:d_pos]
        neg = rng.permutation(dataset.neg_idx)[:d_neg]
        return x[np.concatenate([pos, neg])].copy()
    return kmeans(x, d, rng, strategy.kmeans_iters)


# ------------------------------------------------------------------- maps


@dataclass(frozen=True)
class NystromMap:
    landmarks: np.ndarray
    transform: np.ndarray
    kernel: KernelSpec
    rank_kept: int

    @property
    def d(self) -> int:
        return self.landmarks.shape[0]

    @property
    def p(self) -> int:
        return self.landmarks.shape[1]


def _eigh(gram):
    try:
        w, q = np.linalg.eigh(gram)
    except np.linalg.LinAlgError as exc:
        raise EigError(f"eigendecomposition failed: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(q))):
        raise EigError("eigendecomposition produced non-finite values")
    return w, q


def inverse_sqrt_psd(gram, eig_tol: float = 1e-12) -> tuple[np.ndarray, int]:
    """Symmetric ``(A^+)^{1/2}`` of a PSD matrix and the number of eigenvalues kept.

    Eigenvalues at or below ``eig_tol * max_eigenvalue`` are treated as zero.
    """
    w, q = _eigh(gram)
    top = w.max() if w.size else 0.0
    keep = w > eig_tol * top if top > 0 else np.zeros_like(w, dtype=bool)
    inv_sqrt = np.zeros_like(w)
    inv_sqrt[keep] = 1.0 / np.sqrt(w[keep])
    m = (q * inv_sqrt) @ q.T
    return 0.5 * (m + m.T), int(keep.sum())


def nystrom_from_landmarks(landmarks, spec: KernelSpec, eig_tol: float = 1e-12) -> NystromMap:
    landmarks = np.array(np.atleast_2d(landmarks), dtype=float)
    m, rank = inverse_sqrt_psd(kernel_matrix(landmarks, landmarks, spec), eig_tol)
    return NystromMap(landmarks, m, spec, rank)


def fit_nystrom(dataset: Dataset, strategy: LandmarkStrategy, spec: KernelSpec,
                eig_tol: float = 1e-12) -> NystromMap:
    return nystrom_from_landmarks(select_landmarks(dataset, strategy), spec, eig_tol)


def transform(fmap: NystromMap, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x.reshape(1, -1) if x.size else x.reshape(0, fmap.p)
    if x.shape[1] != fmap.p:
        raise DimensionError(f"expected {fmap.p} features, got {x.shape[1]}")
    if x.shape[0] == 0:
        return np.zeros((0, fmap.d))
    return kernel_matrix(x, fmap.landmarks, fmap.kernel) @ fmap.transform


def factor_psd(gram) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``V = U diag(sqrt(w))`` with eigenvalues ``w`` descending; returns ``(V, U, w)``.

    Tiny negative eigenvalues from rounding are clipped to zero.
    """
    w, u = _eigh(np.asarray(gram, dtype=float))
    w, u = w[::-1], u[:, ::-1]
    w = np.maximum(w, 0.0)
    return u * np.sqrt(w), u, w


def exact_factor(dataset: Dataset, spec: KernelSpec, cap: int = DEFAULT_EXACT_CAP) -> np.ndarray:
    if dataset.n > cap:
        raise CapExceededError(f"exact factorisation of n={dataset.n} exceeds cap {cap}")
    x = dataset.features
    return factor_psd(kernel_matrix(x, x, spec))[0]


def spectral_norm_sym(a, tol: float = 1e-6, max_iter: int = 500, seed: int = 0) -> float:
    """Largest absolute eigenvalue of a symmetric matrix by power iteration."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return 0.0
    v = np.random.default_rng(seed).standard_normal(a.shape[0])
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = a @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - est) <= tol * norm:
            return float(norm)
        est = norm
    return float(est)


def approx_error(dataset: Dataset, fmap: NystromMap, cap: int = DEFAULT_EXACT_CAP) -> float:
    """Spectral norm of ``K - V V'`` on the training rows."""
    if dataset.n > cap:
        raise CapExceededError(f"n={dataset.n} exceeds cap {cap} for the dense kernel matrix")
    x = dataset.features
    v = transform(fmap, x)
    return spectral_norm_sym(kernel_matrix(x, x, fmap.kernel) - v @ v.T)
