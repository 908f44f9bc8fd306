"""Index pairs (positive, negative) for complete and incomplete U-statistics."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .data import Dataset
from .errors import CapExceededError

DEFAULT_PAIR_CAP = 10_000_000


@dataclass(frozen=True)
class PairBatch:
    """``B`` pairs ``(pos[k], neg[k])`` of row indices; duplicates allowed."""

    pos: np.ndarray
    neg: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        pos = np.ascontiguousarray(self.pos, dtype=np.intp)
        neg = np.ascontiguousarray(self.neg, dtype=np.intp)
        if pos.shape != neg.shape or pos.ndim != 1:
            raise ValueError("pos and neg must be 1-D arrays of equal length")
        pos.flags.writeable = False
        neg.flags.writeable = False
        object.__setattr__(self, "pos", pos)
        object.__setattr__(self, "neg", neg)

    @property
    def B(self) -> int:
        return self.pos.size

    def __len__(self) -> int:
        return self.B

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.pos.tolist(), self.neg.tolist()))

    def max_multiplicity(self) -> int:
        """Largest number of times any single sample index occurs in the batch."""
        if self.B == 0:
            return 0
        return int(np.bincount(np.concatenate([self.pos, self.neg])).max())


def sample_pairs(dataset: Dataset, B: int, seed: int) -> PairBatch:
    """Draw ``B`` pairs i.i.d. uniformly from I+ x I-, with replacement."""
    dataset.require_both_classes()
    if B < 1:
        raise ValueError("B must be positive")
    rng = np.random.default_rng(seed)
    a = rng.integers(dataset.n_pos, size=B)
    b = rng.integers(dataset.n_neg, size=B)
    return PairBatch(dataset.pos_idx[a], dataset.neg_idx[b], seed)


def default_B(dataset: Dataset) -> int:
    return dataset.n


def cartesian_pairs(pos_idx, neg_idx, cap: int = DEFAULT_PAIR_CAP) -> PairBatch:
    """Every pair of ``pos_idx x neg_idx`` once, positives varying slowest."""
    pos_idx = np.asarray(pos_idx, dtype=np.intp)
    neg_idx = np.asarray(neg_idx, dtype=np.intp)
    total = pos_idx.size * neg_idx.size
    if total > cap:
        raise CapExceededError(f"{pos_idx.size} x {neg_idx.size} = {total} pairs exceeds cap {cap}")
    return PairBatch(np.repeat(pos_idx, neg_idx.size), np.tile(neg_idx, pos_idx.size))


def enumerate_full(dataset: Dataset, cap: int = DEFAULT_PAIR_CAP) -> PairBatch:
    dataset.require_both_classes()
    return cartesian_pairs(dataset.pos_idx, dataset.neg_idx, cap)
