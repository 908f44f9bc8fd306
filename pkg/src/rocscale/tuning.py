"""Stratified k-fold cross-validation of the ridge weight."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset
from .errors import RocScaleError, TooFewSamplesError
from .evaluation import empirical_auc
from .model import TrainConfig, predict_scores, train


def default_grid() -> tuple:
    return tuple(np.logspace(-4, 1, 11).tolist())


@dataclass(frozen=True)
class CvSpec:
    folds: int = 5
    lambda_grid: tuple = field(default_factory=default_grid)
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(v) for v in self.lambda_grid)
        if not grid or any(v <= 0 for v in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("lambda grid must be non-empty, positive and strictly increasing")
        if self.folds < 2:
            raise ValueError("need at least 2 folds")
        object.__setattr__(self, "lambda_grid", grid)


def stratified_folds(dataset: Dataset, folds: int, seed: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Split into ``folds`` (train_idx, valid_idx) pairs with per-class balance.

    Each class is shuffled and the two classes are dealt round-robin into the
    folds as one continuous stream (positives first), so per-fold class counts
    differ by at most one and fold sizes by at most one.
    """
    if folds < 2 or folds > dataset.n:
        raise TooFewSamplesError(f"cannot make {folds} folds from {dataset.n} samples")
    if dataset.n_pos < 2 or dataset.n_neg < 2:
        raise TooFewSamplesError("each class needs at least two samples for cross-validation")
    rng = np.random.default_rng(seed)
    stream = np.concatenate([rng.permutation(dataset.pos_idx), rng.permutation(dataset.neg_idx)])
    fold_of = np.empty(dataset.n, dtype=np.intp)
    fold_of[stream] = np.arange(dataset.n) % folds
    out = []
    for k in range(folds):
        valid = np.flatnonzero(fold_of == k)
        train_idx = np.flatnonzero(fold_of != k)
        out.append((train_idx, valid))
    return out


@dataclass
class CvResult:
    lambda_best: float
    table: list  # (fold, lambda, auc)

    def __iter__(self):
        return iter((self.lambda_best, self.table))

    def mean_auc(self) -> dict:
        means = {}
        for lam in sorted({row[1] for row in self.table}):
            means[lam] = float(np.mean([row[2] for row in self.table if row[1] == lam]))
        return means

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["fold", "lambda", "auc"])
            for fold, lam, auc in self.table:
                writer.writerow([fold, repr(lam), repr(auc)])


def cv_select_lambda(dataset: Dataset, base_config: TrainConfig, cv: CvSpec = CvSpec()) -> CvResult:
    """Pick the grid value with the best mean validation AUC; ties go to the larger value."""
    if min(dataset.n_pos, dataset.n_neg) < cv.folds:
        raise TooFewSamplesError(
            f"each class needs at least {cv.folds} samples so every validation fold holds both"
        )
    table = []
    for k, (tr_idx, va_idx) in enumerate(stratified_folds(dataset, cv.folds, cv.seed)):
        tr, va = dataset.subset(tr_idx), dataset.subset(va_idx)
        for lam in cv.lambda_grid:
            try:
                model = train(tr, replace(base_config, lam=lam))
            except RocScaleError as exc:
                raise type(exc)(f"fold {k}, lambda {lam:g}: {exc}") from exc
            table.append((k, lam, empirical_auc(predict_scores(model, va.features), va.labels)))
    means = CvResult(0.0, table).mean_auc()
    top = max(means.values())
    best = max(lam for lam, m in means.items() if m == top)
    return CvResult(best, table)
