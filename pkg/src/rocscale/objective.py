"""Pairwise hinge risk over a pair batch, its ridge objective and subgradient.

For a batch D of pairs (i, j) the risk is ``mean([1 - beta.(x_i - x_j)]_+)``.
The subgradient counts a pair only when ``1 - beta.(x_i - x_j) > 0`` strictly,
so pairs sitting exactly on the kink contribute nothing.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .pairs import DEFAULT_PAIR_CAP, PairBatch, cartesian_pairs

# Materialise pair differences (B x q) only below this many entries; larger
# problems scatter pair weights back onto samples instead.
MATERIALIZE_LIMIT = 4_000_000


@dataclass(frozen=True)
class ObjectiveConfig:
    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")


class PairwiseHinge:
    """Regularised hinge objective with the batch geometry precomputed.

    Both evaluation routes give the same numbers up to rounding: for small
    ``B * q`` the difference matrix is built once; otherwise margins come from
    ``X @ beta`` and the gradient from ``X.T @ c``, where ``c`` holds per-sample
    signed counts of active pairs.
    """

    def __init__(self, features, batch: PairBatch, lam: float, materialize_limit=MATERIALIZE_LIMIT):
        x = np.ascontiguousarray(features, dtype=float)
        if x.ndim != 2:
            raise DimensionError("features must be a 2-D matrix")
        if batch.B == 0:
            raise ValueError("empty pair batch")
        if max(batch.pos.max(), batch.neg.max()) >= x.shape[0]:
            raise DimensionError("pair indices exceed the number of feature rows")
        self.n, self.q = x.shape
        self.B = batch.B
        self.lam = float(lam)
        self._pos = batch.pos
        self._neg = batch.neg
        if self.B * self.q <= materialize_limit:
            self._diff = x[batch.pos] - x[batch.neg]
            self._x = None
        else:
            self._diff = None
            self._x = x

    def _check(self, beta):
        beta = np.asarray(beta, dtype=float)
        if beta.shape != (self.q,):
            raise DimensionError(f"beta has shape {beta.shape}, expected ({self.q},)")
        return beta

    def margins(self, beta) -> np.ndarray:
        beta = self._check(beta)
        if self._diff is not None:
            return self._diff @ beta
        s = self._x @ beta
        return s[self._pos] - s[self._neg]

    def risk(self, beta) -> float:
        slack = 1.0 - self.margins(beta)
        return float(np.sum(np.maximum(slack, 0.0)) / self.B)

    def value_and_grad(self, beta) -> tuple[float, np.ndarray]:
        beta = self._check(beta)
        slack = 1.0 - self.margins(beta)
        active = slack > 0
        risk = float(np.sum(np.where(active, slack, 0.0)) / self.B)
        if self._diff is not None:
            g_loss = self._diff.T @ active.astype(float)
        else:
            w = active.astype(float)
            c = np.bincount(self._pos, weights=w, minlength=self.n)
            c -= np.bincount(self._neg, weights=w, minlength=self.n)
            g_loss = self._x.T @ c
        grad = -g_loss / self.B + self.lam * beta
        value = risk + 0.5 * self.lam * float(beta @ beta)
        return value, grad


def incomplete_risk(beta, features, batch: PairBatch) -> float:
    return PairwiseHinge(features, batch, lam=1.0).risk(beta)


def full_risk(beta, features, pos_idx, neg_idx, cap: int = DEFAULT_PAIR_CAP) -> float:
    """Complete U-statistic risk over all of ``pos_idx x neg_idx``."""
    return incomplete_risk(beta, features, cartesian_pairs(pos_idx, neg_idx, cap))


def objective(beta, features, batch: PairBatch, config: ObjectiveConfig) -> float:
    return PairwiseHinge(features, batch, config.lam).value_and_grad(beta)[0]


def gradient(beta, features, batch: PairBatch, config: ObjectiveConfig) -> np.ndarray:
    return PairwiseHinge(features, batch, config.lam).value_and_grad(beta)[1]


def kernel_objective(theta, gram, batch: PairBatch, lam: float) -> float:
    """Objective in representer form: hinge on ``(K theta)_i - (K theta)_j`` plus ``lam/2 theta'K theta``."""
    gram = np.asarray(gram, dtype=float)
    theta = np.asarray(theta, dtype=float)
    f = gram @ theta
    slack = 1.0 - (f[batch.pos] - f[batch.neg])
    risk = float(np.sum(np.maximum(slack, 0.0)) / batch.B)
    return risk + 0.5 * lam * float(theta @ f)
