"""Desk-scale reproduction of the synthetic timing/AUC comparisons.

Linear scenario: full pair set vs sampled pairs (B = n).
Radial scenario: exact kernel factor vs Nystrom map, both over sampled pairs.
Cells that are over their size cap are reported with status "skipped".
"""
from __future__ import annotations

import csv
import datetime as _dt
import json
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .data import SyntheticSpec, generate
from .errors import CapExceededError
from .evaluation import empirical_auc
from .model import TrainConfig, predict_scores, train, train_full_oracle
from .nystrom import KernelSpec, LandmarkKind, LandmarkStrategy
from .tuning import CvSpec, cv_select_lambda

FIELDS = ["scenario", "n_train", "method", "mean_time_s", "se_time_s", "mean_auc", "se_auc",
          "replications", "status"]


@dataclass
class BenchRow:
    scenario: str
    n_train: int
    method: str
    mean_time_s: Optional[float]
    se_time_s: Optional[float]
    mean_auc: Optional[float]
    se_auc: Optional[float]
    replications: int
    status: str = "ok"


@dataclass
class BenchReport:
    rows: list
    environment: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"rows": [asdict(r) for r in self.rows], "environment": self.environment},
                          indent=1)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(FIELDS)
            for r in self.rows:
                writer.writerow(["--" if getattr(r, f) is None else getattr(r, f) for f in FIELDS])


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple = (5000,)
    scenarios: tuple = ("linear", "radial")
    replications: int = 10
    seed: int = 0
    n_test: int = 25_000
    lam_linear: float = 1e-2
    lam_radial: float = 1e-2
    d: int = 300
    full_max_n: int = 2000
    exact_max_n: int = 2000
    max_n: int = 100_000
    cv: bool = False


def _se(values) -> float:
    values = np.asarray(values, dtype=float)
    return float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0


def rep_seeds(seed: int, rep: int) -> tuple[int, int, int]:
    """Independent (train data, test data, fitting) seeds for one replication."""
    a, b, c = np.random.SeedSequence([seed, rep]).generate_state(3)
    return int(a), int(b), int(c)


def _methods(scenario: str, n: int, cfg: BenchConfig, fit_seed: int, lam: float):
    """(name, trainer or None if over cap, config) per method of a scenario."""
    if scenario == "linear":
        base = TrainConfig(lam=lam, seed=fit_seed)
        return [
            ("full", train_full_oracle if n <= cfg.full_max_n else None, base),
            ("incomplete", train, base),
        ]
    kernel = KernelSpec.rbf_default(2)
    exact = TrainConfig(lam=lam, kernel=kernel, seed=fit_seed, exact_cap=max(cfg.exact_max_n, 1))
    nys = replace(exact, landmark=LandmarkStrategy(LandmarkKind.STRATIFIED, min(cfg.d, n), fit_seed))
    return [
        ("incomplete", train if n <= cfg.exact_max_n else None, exact),
        ("incomplete+nystrom", train, nys),
    ]


def run_bench(cfg: BenchConfig, worker_count: int = 1,
              log: Callable[[str], None] = lambda msg: None) -> BenchReport:
    rows = []
    for scenario in cfg.scenarios:
        for n in cfg.sizes:
            if n > cfg.max_n:
                continue
            times, aucs, skipped = {}, {}, set()
            for rep in range(cfg.replications):
                s_train, s_test, s_fit = rep_seeds(cfg.seed, rep)
                tr = generate(SyntheticSpec(scenario, n, seed=s_train))
                te = generate(SyntheticSpec(scenario, cfg.n_test, seed=s_test))
                lam = cfg.lam_linear if scenario == "linear" else cfg.lam_radial
                if cfg.cv:
                    tuned = _methods(scenario, n, cfg, s_fit, lam)[-1][2]
                    lam = cv_select_lambda(tr, tuned, CvSpec(seed=s_fit)).lambda_best
                for name, trainer, config in _methods(scenario, n, cfg, s_fit, lam):
                    if trainer is None:
                        skipped.add(name)
                        continue
                    t0 = time.perf_counter()
                    try:
                        model = trainer(tr, config)
                    except CapExceededError:
                        skipped.add(name)
                        continue
                    times.setdefault(name, []).append(time.perf_counter() - t0)
                    aucs.setdefault(name, []).append(
                        empirical_auc(predict_scores(model, te.features), te.labels))
                log(f"{scenario} n={n} rep {rep + 1}/{cfg.replications} done")
            for name, _, _ in _methods(scenario, n, cfg, 0, 1.0):
                if name in skipped or name not in times:
                    rows.append(BenchRow(scenario, n, name, None, None, None, None, 0, "skipped"))
                    continue
                t, a = times[name], aucs[name]
                rows.append(BenchRow(scenario, n, name, float(np.mean(t)), _se(t), float(np.mean(a)),
                                     _se(a), len(t)))
    env = {
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "seed": cfg.seed,
        "worker_count": worker_count,
    }
    return BenchReport(rows, env)
