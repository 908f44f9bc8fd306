"""ROC-optimising SVMs trained on sampled pairs, with Nystrom kernel features."""
from .data import Dataset, Scenario, SyntheticSpec, generate, load_csv, write_csv
from .evaluation import empirical_auc, roc_curve
from .model import (
    CalibrationTarget,
    RocSvmModel,
    TrainConfig,
    load_model,
    predict_scores,
    save_model,
    train,
    train_full_oracle,
    train_kernel,
    train_kernel_exact,
    train_linear,
)
from .nystrom import KernelSpec, LandmarkStrategy, fit_nystrom
from .optimizer import OptimizerConfig
from .pairs import PairBatch, enumerate_full, sample_pairs

__version__ = "0.1.0"
