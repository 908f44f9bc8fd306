"""Empirical AUC, ROC curves and thresholded confusion metrics.

Tied scores between a positive and a negative count as one half
(Mann-Whitney convention), so a constant scorer has AUC 0.5.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DimensionError, SingleClassError


def _split(scores, labels):
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels)
    if scores.ndim != 1 or scores.shape != labels.shape:
        raise DimensionError(
            f"scores and labels must be 1-D of equal length, got {scores.shape} and {labels.shape}"
        )
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    pos = labels > 0
    n_pos = int(pos.sum())
    n_neg = labels.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClassError(f"need both classes, got n_pos={n_pos}, n_neg={n_neg}")
    return scores, pos, n_pos, n_neg


def empirical_auc(scores, labels) -> float:
    """Fraction of (positive, negative) pairs ranked correctly, ties counting 1/2.

    Computed from midranks in O(n log n). The numerator is formed as the exact
    integer ``2 * U`` so the result is bit-identical to a pairwise count
    ``(2 * wins + ties) / (2 * n_pos * n_neg)``.
    """
    scores, pos, n_pos, n_neg = _split(scores, labels)
    ranks2 = np.rint(2.0 * rankdata(scores, method="average")).astype(np.int64)
    two_u = int(ranks2[pos].sum()) - n_pos * (n_pos + 1)
    return two_u / (2 * n_pos * n_neg)


def auc_standard_error(scores, labels) -> tuple[float, float]:
    """AUC together with its DeLong standard error."""
    scores, pos, n_pos, n_neg = _split(scores, labels)
    r_all = rankdata(scores, method="average")
    r_pos = rankdata(scores[pos], method="average")
    r_neg = rankdata(scores[~pos], method="average")
    # placement values: share of the other class ranked below (ties 1/2)
    v_pos = (r_all[pos] - r_pos) / n_neg
    v_neg = 1.0 - (r_all[~pos] - r_neg) / n_pos
    auc = float(v_pos.mean())
    var = 0.0
    if n_pos > 1:
        var += v_pos.var(ddof=1) / n_pos
    if n_neg > 1:
        var += v_neg.var(ddof=1) / n_neg
    return auc, float(np.sqrt(var))


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    thresholds: np.ndarray
    auc_trapezoid: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fpr", "tpr"])
            for f, t in zip(self.fpr, self.tpr):
                writer.writerow([repr(float(f)), repr(float(t))])


def roc_curve(scores, labels) -> RocCurve:
    """Sweep thresholds over the distinct scores, highest first.

    At threshold ``t`` every sample with score >= t is called positive, so the
    curve runs from (0, 0) to (1, 1). Tie groups give diagonal segments, which
    is what makes the trapezoid area agree with :func:`empirical_auc`.
    """
    scores, pos, n_pos, n_neg = _split(scores, labels)
    order = np.argsort(-scores, kind="mergesort")
    s = scores[order]
    p = pos[order]
    last_of_group = np.r_[s[1:] != s[:-1], True]
    tp = np.cumsum(p)[last_of_group]
    fp = np.cumsum(~p)[last_of_group]
    tpr = np.r_[0.0, tp / n_pos]
    fpr = np.r_[0.0, fp / n_neg]
    thresholds = np.r_[np.inf, s[last_of_group]]
    area = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1])) / 2.0)
    return RocCurve(fpr=fpr, tpr=tpr, thresholds=thresholds, auc_trapezoid=area)


def confusion_at(scores, labels, threshold: float) -> dict:
    """TPR, FPR and accuracy when ``score > threshold`` is called positive."""
    scores, pos, n_pos, n_neg = _split(scores, labels)
    pred = scores > threshold
    tp = int(np.sum(pred & pos))
    fp = int(np.sum(pred & ~pos))
    tn = n_neg - fp
    return {
        "tpr": tp / n_pos,
        "fpr": fp / n_neg,
        "accuracy": (tp + tn) / (n_pos + n_neg),
    }
