"""Training pipelines, intercept calibration, prediction and model files.

Three feature spaces share one pairwise-hinge trainer:

* raw features (linear model);
* a Nystrom map over ``d`` landmarks (kernel model);
* the exact factor ``K = V V'`` over all training rows (kernel model without
  approximation, stored as a map whose landmarks are the training rows).
"""
from __future__ import annotations

import enum
import json
import os
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .data import Dataset
from .errors import CapExceededError, DimensionError, EmptyClassError, FormatError
from .nystrom import (
    DEFAULT_EXACT_CAP,
    KernelKind,
    KernelSpec,
    LandmarkStrategy,
    NystromMap,
    _eigh,
    fit_nystrom,
    kernel_matrix,
    transform,
)
from .objective import ObjectiveConfig
from .optimizer import OptimizerConfig, TrainTrace, minimize
from .pairs import PairBatch, default_B, enumerate_full, sample_pairs

FORMAT_VERSION = 1
FULL_ORACLE_PAIR_CAP = 1_000_000


class TargetKind(enum.Enum):
    SPECIFICITY = "specificity"
    SENSITIVITY = "sensitivity"


@dataclass(frozen=True)
class CalibrationTarget:
    kind: TargetKind = TargetKind.SPECIFICITY
    value: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "kind", TargetKind(self.kind))
        if not 0.0 < self.value <= 1.0:
            raise ValueError("calibration target must lie in (0, 1]")

    @classmethod
    def parse(cls, text: str) -> "CalibrationTarget":
        """``"spec:0.95"`` or ``"sens:0.9"``."""
        kind, _, value = text.partition(":")
        kinds = {"spec": TargetKind.SPECIFICITY, "specificity": TargetKind.SPECIFICITY,
                 "sens": TargetKind.SENSITIVITY, "sensitivity": TargetKind.SENSITIVITY}
        if kind not in kinds or not value:
            raise ValueError(f"bad calibration target {text!r}; use spec:<v> or sens:<v>")
        return cls(kinds[kind], float(value))


@dataclass(frozen=True)
class TrainConfig:
    lam: float = 1e-3
    B: Union[int, str] = "auto"
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    landmark: Optional[LandmarkStrategy] = None
    kernel: Optional[KernelSpec] = None
    seed: int = 0
    target: CalibrationTarget = field(default_factory=CalibrationTarget)
    standardize: bool = False
    exact_cap: int = DEFAULT_EXACT_CAP
    eig_tol: float = 1e-12

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.landmark is not None and self.kernel is None:
            raise ValueError("a landmark strategy needs a kernel")
        if self.B != "auto" and int(self.B) < 1:
            raise ValueError("B must be 'auto' or a positive count")

    def resolve_B(self, dataset: Dataset) -> int:
        return default_B(dataset) if self.B == "auto" else int(self.B)


@dataclass
class RocSvmModel:
    beta: np.ndarray
    alpha: float
    p: int
    feature_map: Optional[NystromMap] = None
    train_meta: dict = field(default_factory=dict)
    scaler_mean: Optional[np.ndarray] = None
    scaler_scale: Optional[np.ndarray] = None
    trace: Optional[TrainTrace] = field(default=None, repr=False, compare=False)

    @property
    def model_type(self) -> str:
        return "linear" if self.feature_map is None else "kernel"

    def features(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.ndim == 1:
            x = x.reshape(-1, self.p) if x.size else x.reshape(0, self.p)
        if x.shape[1] != self.p:
            raise DimensionError(f"model expects {self.p} features, got {x.shape[1]}")
        if self.scaler_mean is not None:
            x = (x - self.scaler_mean) / self.scaler_scale
        if self.feature_map is None:
            return x
        return transform(self.feature_map, x)

    def raw_scores(self, x) -> np.ndarray:
        return self.features(x) @ self.beta


# ------------------------------------------------------------------ training


def _prepare(dataset: Dataset, config: TrainConfig):
    dataset.require_both_classes()
    if not config.standardize:
        return dataset, None, None
    mean = dataset.features.mean(axis=0)
    scale = dataset.features.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return dataset.standardized(mean, scale), mean, scale


def _fit(features, batch: PairBatch, config: TrainConfig):
    return minimize(features, batch, ObjectiveConfig(config.lam), config.optimizer)


def _meta(config: TrainConfig, batch: PairBatch, trace: TrainTrace, **extra) -> dict:
    meta = {
        "lambda": config.lam,
        "B": batch.B,
        "seed": config.seed,
        "epochs_run": trace.epochs_run,
        "objective_final": trace.objective[trace.best_epoch],
        "stop_reason": trace.stop_reason,
    }
    meta.update(extra)
    return meta


def _finish(model: RocSvmModel, dataset: Dataset, config: TrainConfig, trace: TrainTrace):
    model.alpha = calibrate_intercept(model, dataset, config.target)
    model.trace = trace
    return model


def train_linear(dataset: Dataset, config: TrainConfig, batch: Optional[PairBatch] = None) -> RocSvmModel:
    """Linear ROC-SVM on raw features over ``B`` sampled pairs (or ``batch``)."""
    work, mean, scale = _prepare(dataset, config)
    if batch is None:
        batch = sample_pairs(work, config.resolve_B(work), config.seed)
    beta, trace = _fit(work.features, batch, config)
    model = RocSvmModel(beta, 0.0, dataset.p, None, _meta(config, batch, trace), mean, scale)
    return _finish(model, dataset, config, trace)


def train_kernel(dataset: Dataset, config: TrainConfig, batch: Optional[PairBatch] = None) -> RocSvmModel:
    """Kernel ROC-SVM linearised through a Nystrom map over ``config.landmark``."""
    if config.kernel is None or config.landmark is None:
        raise ValueError("train_kernel needs both a kernel and a landmark strategy")
    work, mean, scale = _prepare(dataset, config)
    fmap = fit_nystrom(work, config.landmark, config.kernel, config.eig_tol)
    v = transform(fmap, work.features)
    if batch is None:
        batch = sample_pairs(work, config.resolve_B(work), config.seed)
    beta, trace = _fit(v, batch, config)
    meta = _meta(config, batch, trace, d=fmap.d, rank_kept=fmap.rank_kept,
                 landmark_strategy=config.landmark.kind.value)
    model = RocSvmModel(beta, 0.0, dataset.p, fmap, meta, mean, scale)
    return _finish(model, dataset, config, trace)


def train_kernel_exact(dataset: Dataset, config: TrainConfig, batch: Optional[PairBatch] = None) -> RocSvmModel:
    """Kernel ROC-SVM on the exact factor ``V = U diag(sqrt(w))`` of the full Gram matrix.

    The fitted weights are rotated into the symmetric map ``K^{+1/2}`` over the
    training rows, so prediction uses the same code path as the Nystrom model.
    """
    if config.kernel is None:
        raise ValueError("train_kernel_exact needs a kernel")
    work, mean, scale = _prepare(dataset, config)
    if work.n > config.exact_cap:
        raise CapExceededError(f"exact kernel training of n={work.n} exceeds cap {config.exact_cap}")
    x = work.features
    w, u = _eigh(kernel_matrix(x, x, config.kernel))
    keep = w > config.eig_tol * w.max()
    w, u = w[keep][::-1], u[:, keep][:, ::-1]
    v = u * np.sqrt(w)
    if batch is None:
        batch = sample_pairs(work, config.resolve_B(work), config.seed)
    beta_v, trace = _fit(v, batch, config)
    m = (u / np.sqrt(w)) @ u.T
    fmap = NystromMap(x.copy(), 0.5 * (m + m.T), config.kernel, int(keep.sum()))
    meta = _meta(config, batch, trace, d=work.n, rank_kept=fmap.rank_kept, landmark_strategy="all")
    model = RocSvmModel(u @ beta_v, 0.0, dataset.p, fmap, meta, mean, scale)
    return _finish(model, dataset, config, trace)


def train(dataset: Dataset, config: TrainConfig, batch: Optional[PairBatch] = None) -> RocSvmModel:
    if config.kernel is None:
        return train_linear(dataset, config, batch)
    if config.landmark is None:
        return train_kernel_exact(dataset, config, batch)
    return train_kernel(dataset, config, batch)


def train_full_oracle(dataset: Dataset, config: TrainConfig, cap: int = FULL_ORACLE_PAIR_CAP) -> RocSvmModel:
    """Same pipeline as :func:`train` but over every positive-negative pair."""
    batch = enumerate_full(dataset, cap=cap)
    return train(dataset, config, batch)


# ---------------------------------------------------------- calibration etc.


def calibrate_intercept(model: RocSvmModel, dataset: Dataset,
                        target: CalibrationTarget = CalibrationTarget()) -> float:
    """Intercept placing the decision boundary at a class-score quantile.

    Specificity ``s``: ``-quantile(negative scores, s)``. Sensitivity ``s``:
    ``-quantile(positive scores, 1 - s)``. Quantiles use the "higher" rule.
    """
    scores = model.raw_scores(dataset.features)
    if target.kind is TargetKind.SPECIFICITY:
        ref, level = scores[dataset.neg_idx], target.value
    else:
        ref, level = scores[dataset.pos_idx], 1.0 - target.value
    if ref.size == 0:
        raise EmptyClassError(f"no samples of the class needed for {target.kind.value} calibration")
    return -float(np.quantile(ref, level, method="higher"))


def predict_scores(model: RocSvmModel, x) -> np.ndarray:
    return model.alpha + model.raw_scores(x)


# ------------------------------------------------------------- serialization


def _floats(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def model_to_dict(model: RocSvmModel) -> dict:
    out = {
        "format_version": FORMAT_VERSION,
        "model_type": model.model_type,
        "p": model.p,
        "alpha": float(model.alpha),
        "beta": _floats(model.beta),
    }
    if model.feature_map is not None:
        fm = model.feature_map
        out["kernel"] = {"kind": fm.kernel.kind.value, "gamma": fm.kernel.gamma}
        out["landmarks"] = _floats(fm.landmarks)
        out["transform"] = _floats(fm.transform)
        out["rank_kept"] = fm.rank_kept
    if model.scaler_mean is not None:
        out["scaler"] = {"mean": _floats(model.scaler_mean), "scale": _floats(model.scaler_scale)}
    out["train_meta"] = model.train_meta
    return out


def model_from_dict(obj: dict) -> RocSvmModel:
    if not isinstance(obj, dict):
        raise FormatError("model file must hold a JSON object")
    version = obj.get("format_version")
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported model format_version {version!r}")
    try:
        p = int(obj["p"])
        beta = np.array(obj["beta"], dtype=float)
        fmap = None
        if obj["model_type"] == "kernel":
            k = obj["kernel"]
            spec = KernelSpec(KernelKind(k["kind"]), k.get("gamma"))
            landmarks = np.array(obj["landmarks"], dtype=float).reshape(-1, p)
            m = np.array(obj["transform"], dtype=float).reshape(landmarks.shape[0], -1)
            fmap = NystromMap(landmarks, m, spec, int(obj["rank_kept"]))
        elif obj["model_type"] != "linear":
            raise FormatError(f"unknown model_type {obj['model_type']!r}")
        mean = scale = None
        if "scaler" in obj:
            mean = np.array(obj["scaler"]["mean"], dtype=float)
            scale = np.array(obj["scaler"]["scale"], dtype=float)
        model = RocSvmModel(beta, float(obj["alpha"]), p, fmap, dict(obj.get("train_meta", {})),
                            mean, scale)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed model file: {exc}") from exc
    q = p if fmap is None else fmap.transform.shape[1]
    if beta.shape != (q,):
        raise FormatError(f"beta has length {beta.size}, expected {q}")
    return model


def save_model(model: RocSvmModel, path) -> None:
    text = json.dumps(model_to_dict(model), indent=1)
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")
    os.replace(tmp, path)


def load_model(path) -> RocSvmModel:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc.msg})") from exc
    return model_from_dict(obj)
