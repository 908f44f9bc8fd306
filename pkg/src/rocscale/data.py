"""Labelled datasets, CSV interchange and the two synthetic scenarios.

Synthetic model: ``y = sign(offset + f(x) + eps)`` with ``x ~ N_2(0, I)`` and
``eps ~ N(0, 1)``, where ``f(x) = x1 + x2`` (linear) or ``f(x) = |x|^2``
(radial). The offset sets the class balance.
"""
from __future__ import annotations

import csv
import enum
import functools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

import numpy as np

from .errors import (
    DegenerateError,
    DimensionError,
    LabelError,
    NoBracketError,
    ParseError,
    SingleClassError,
)
from .evaluation import auc_standard_error


@dataclass(frozen=True)
class Dataset:
    """Feature matrix with labels in {-1, +1}.

    Arrays are copied and frozen on construction. Single-class datasets are
    allowed here; trainers reject them with :class:`SingleClassError`.
    """

    features: np.ndarray
    labels: np.ndarray
    pos_idx: np.ndarray = field(init=False, repr=False)
    neg_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.features, dtype=float)
        y = np.array(self.labels)
        if x.ndim == 1:
            x = x.reshape(-1, 1)
        if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
            raise DimensionError(f"features {x.shape} and labels {y.shape} do not line up")
        if not np.all(np.isfinite(x)):
            raise ValueError("features must be finite")
        if not np.all((y == 1) | (y == -1)):
            bad = sorted(set(np.unique(y).tolist()) - {-1, 1})
            raise LabelError(f"labels must be -1 or +1, found {bad[:5]}")
        y = y.astype(np.int8)
        pos = np.flatnonzero(y == 1)
        neg = np.flatnonzero(y == -1)
        for arr in (x, y, pos, neg):
            arr.flags.writeable = False
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "pos_idx", pos)
        object.__setattr__(self, "neg_idx", neg)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def p(self) -> int:
        return self.features.shape[1]

    @property
    def n_pos(self) -> int:
        return self.pos_idx.size

    @property
    def n_neg(self) -> int:
        return self.neg_idx.size

    def subset(self, idx) -> "Dataset":
        idx = np.asarray(idx)
        return Dataset(self.features[idx], self.labels[idx])

    def require_both_classes(self) -> None:
        if self.n_pos == 0 or self.n_neg == 0:
            raise SingleClassError(
                f"training needs both classes, got n_pos={self.n_pos}, n_neg={self.n_neg}"
            )

    def standardized(self, mean=None, scale=None) -> "Dataset":
        if mean is None:
            mean = self.features.mean(axis=0)
        if scale is None:
            scale = self.features.std(axis=0)
            scale = np.where(scale > 0, scale, 1.0)
        return Dataset((self.features - mean) / scale, self.labels)


# --------------------------------------------------------------------------- CSV


def _parse_float(cell: str, row: int, col: int) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(f"row {row}, column {col}: cannot parse {cell!r} as a number") from None
    if not np.isfinite(value):
        raise ParseError(f"row {row}, column {col}: non-finite value {cell!r}")
    return value


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_rows(path) -> tuple[Optional[list[str]], list[list[str]]]:
    """Return ``(header, rows)``; the first row is a header if no cell in it is numeric."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = None
    if not any(_is_number(c) for c in rows[0]):
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    width = len(header) if header is not None else len(rows[0]) if rows else 0
    for k, r in enumerate(rows):
        if len(r) != width:
            line = k + (2 if header is not None else 1)
            raise ParseError(f"line {line}: expected {width} fields, got {len(r)}")
    return header, rows


def _label_position(label_column, header, width) -> int:
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if header is None or label_column not in header:
            raise ParseError(f"label column {label_column!r} not found in header")
        return header.index(label_column)
    pos = int(label_column)
    if not -width <= pos < width:
        raise ParseError(f"label column index {pos} out of range for {width} columns")
    return pos % width


def _map_label(cell: str, label_map, row: int):
    cell = cell.strip()
    if label_map is not None:
        if cell in label_map:
            return label_map[cell]
        if _is_number(cell):
            value = float(cell)
            for key, target in label_map.items():
                if _is_number(str(key)) and float(key) == value:
                    return target
        raise LabelError(f"row {row}: label {cell!r} not covered by the label map")
    if _is_number(cell) and float(cell) in (-1.0, 1.0):
        return int(float(cell))
    raise LabelError(f"row {row}: label {cell!r} is not -1 or +1 and no label map was given")


def load_csv(
    path,
    label_column: Union[int, str] = -1,
    label_map: Optional[Mapping] = None,
) -> Dataset:
    """Read a comma-separated file with one label column.

    ``label_column`` is a header name or a (possibly negative) column index.
    ``label_map`` translates raw label values to -1/+1, e.g. ``{0: -1, 1: 1}``.
    """
    header, rows = read_rows(path)
    if not rows:
        raise ParseError(f"{path}: no data rows")
    width = len(rows[0])
    lab = _label_position(label_column, header, width)
    first_line = 2 if header is not None else 1
    feats = np.empty((len(rows), width - 1))
    labels = np.empty(len(rows), dtype=np.int8)
    cols = [c for c in range(width) if c != lab]
    for k, r in enumerate(rows):
        line = k + first_line
        feats[k] = [_parse_float(r[c], line, c) for c in cols]
        labels[k] = _map_label(r[lab], label_map, line)
        if labels[k] not in (-1, 1):
            raise LabelError(f"row {line}: label map produced {labels[k]}, expected -1 or +1")
    return Dataset(feats, labels)


def load_features(path, drop_column: Optional[Union[int, str]] = None) -> np.ndarray:
    """Read a numeric matrix, optionally dropping one (label) column."""
    header, rows = read_rows(path)
    width = len(rows[0]) if rows else (len(header) if header else 0)
    keep = list(range(width))
    if drop_column is not None:
        keep.remove(_label_position(drop_column, header, width))
    first_line = 2 if header is not None else 1
    out = np.empty((len(rows), len(keep)))
    for k, r in enumerate(rows):
        out[k] = [_parse_float(r[c], k + first_line, c) for c in keep]
    return out


def write_csv(dataset: Dataset, path) -> None:
    """Features then label, with a header. Floats use the shortest exact repr."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{k}" for k in range(dataset.p)] + ["y"])
        for row, y in zip(dataset.features.tolist(), dataset.labels.tolist()):
            writer.writerow([repr(v) for v in row] + [int(y)])


# --------------------------------------------------------------------- synthetic


class Scenario(enum.Enum):
    LINEAR = "linear"
    RADIAL = "radial"


def true_score(scenario: Scenario, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if scenario is Scenario.LINEAR:
        return x @ np.ones(x.shape[1])
    return np.einsum("ij,ij->i", x, x)


@dataclass(frozen=True)
class SyntheticSpec:
    scenario: Scenario
    n: int
    offset: Optional[float] = None  # None: calibrate to target_neg_fraction
    seed: int = 0
    target_neg_fraction: float = 0.8

    def __post_init__(self):
        object.__setattr__(self, "scenario", Scenario(self.scenario))
        if not 0.0 < self.target_neg_fraction < 1.0:
            raise ValueError("target_neg_fraction must lie in (0, 1)")


CALIBRATION_SEED = 20240101
CALIBRATION_SAMPLES = 1_000_000


@functools.lru_cache(maxsize=32)
def _calibrate(scenario, target, mc_samples, seed, lo, hi) -> float:
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((mc_samples, 2))
    latent = true_score(scenario, x) + rng.standard_normal(mc_samples)

    def neg_fraction(a):
        return np.count_nonzero(a + latent < 0) / mc_samples

    f_lo, f_hi = neg_fraction(lo), neg_fraction(hi)
    if not f_hi <= target <= f_lo:
        raise NoBracketError(
            f"target negative fraction {target} not bracketed on [{lo}, {hi}]: "
            f"fractions {f_lo:.4f} .. {f_hi:.4f}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if neg_fraction(mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    return 0.5 * (lo + hi)


def calibrate_offset(
    spec: SyntheticSpec,
    mc_samples: int = CALIBRATION_SAMPLES,
    bracket: tuple[float, float] = (-50.0, 50.0),
    seed: int = CALIBRATION_SEED,
) -> float:
    """Offset giving the target negative-class fraction, by bisection on a fixed MC sample."""
    if mc_samples < 10_000:
        raise ValueError("mc_samples must be at least 1e4")
    return _calibrate(
        spec.scenario, float(spec.target_neg_fraction), int(mc_samples), int(seed),
        float(bracket[0]), float(bracket[1]),
    )


def resolved_offset(spec: SyntheticSpec) -> float:
    return spec.offset if spec.offset is not None else calibrate_offset(spec)


def generate_latent(spec: SyntheticSpec):
    """Draw ``(x, eps, labels)``; exposed so tests can replay the labelling rule."""
    if spec.n < 2:
        raise ValueError("n must be at least 2")
    offset = resolved_offset(spec)
    rng = np.random.default_rng(spec.seed)
    for _ in range(2):
        x = rng.standard_normal((spec.n, 2))
        eps = rng.standard_normal(spec.n)
        y = np.where(offset + true_score(spec.scenario, x) + eps > 0, 1, -1)
        if 0 < np.count_nonzero(y == 1) < spec.n:
            return x, eps, y
    raise DegenerateError(f"two draws of size {spec.n} were single-class")


def generate(spec: SyntheticSpec) -> Dataset:
    x, _, y = generate_latent(spec)
    return Dataset(x, y)


def mc_population_auc(
    spec: SyntheticSpec,
    f_hat: Callable[[np.ndarray], np.ndarray],
    mc_samples: int = 1_000_000,
) -> tuple[float, float]:
    """Monte Carlo population AUC of ``f_hat`` and its standard error.

    The draw uses ``spec.seed`` and ``mc_samples`` in place of ``spec.n``.
    """
    if mc_samples < 10_000:
        raise ValueError("mc_samples must be at least 1e4")
    big = SyntheticSpec(spec.scenario, mc_samples, resolved_offset(spec), spec.seed,
                        spec.target_neg_fraction)
    x, _, y = generate_latent(big)
    return auc_standard_error(np.asarray(f_hat(x), dtype=float), y)


def parse_label_map(text: str) -> dict:
    """Parse ``"0:-1,1:1"`` into ``{"0": -1, "1": 1}``."""
    out = {}
    for item in text.split(","):
        key, _, value = item.partition(":")
        if not _:
            raise ValueError(f"bad label map entry {item!r}")
        out[key.strip()] = int(value)
    return out
