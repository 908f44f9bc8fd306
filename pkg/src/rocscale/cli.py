"""Command-line interface: generate, train, predict, evaluate, tune, bench.

Exit codes: 0 success, 2 usage error, 3 data/model error, 4 numeric failure.
``ROCSCALE_THREADS`` caps the number of BLAS threads.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import bench as bench_mod
from .data import Dataset, SyntheticSpec, generate, load_csv, load_features, parse_label_map, write_csv
from .errors import DataError, NumericError
from .evaluation import confusion_at, empirical_auc, roc_curve
from .model import (
    CalibrationTarget,
    TrainConfig,
    load_model,
    predict_scores,
    save_model,
    train,
)
from .nystrom import KernelSpec, LandmarkStrategy, median_gamma
from .optimizer import OptimizerConfig
from .tuning import CvSpec, cv_select_lambda


def worker_count() -> int:
    raw = os.environ.get("ROCSCALE_THREADS")
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")
    sys.stdout.flush()


def _label_column(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


def _load(args) -> Dataset:
    label_map = parse_label_map(args.label_map) if args.label_map else None
    return load_csv(args.data, _label_column(args.label_col), label_map)


# ------------------------------------------------------------------ commands


def cmd_generate(args) -> int:
    spec = SyntheticSpec(args.scenario, args.n, args.offset, args.seed, args.target_neg)
    write_csv(generate(spec), args.out)
    return 0


def _config(args, dataset: Dataset, lam: float) -> TrainConfig:
    opt = OptimizerConfig(args.optimizer, args.eta, max_epochs=args.max_epochs, tol=args.tol)
    kernel = landmark = None
    if args.kernel != "none":
        gamma = None
        if args.kernel == "rbf":
            if args.gamma is None:
                gamma = 1.0 / dataset.p
            elif args.gamma == "median":
                gamma = median_gamma(dataset.features, seed=args.seed)
            else:
                gamma = float(args.gamma)
        kernel = KernelSpec(args.kernel, gamma)
        if not args.exact:
            landmark = LandmarkStrategy(args.landmark_strategy, args.landmarks_d, args.seed)
    B = args.B if args.B == "auto" else int(args.B)
    return TrainConfig(lam=lam, B=B, optimizer=opt, landmark=landmark, kernel=kernel, seed=args.seed,
                       target=CalibrationTarget.parse(args.calibrate), standardize=args.standardize,
                       exact_cap=args.exact_cap)


def _cv_spec(args) -> CvSpec:
    if args.grid:
        return CvSpec(args.folds, tuple(float(v) for v in args.grid.split(",")), args.cv_seed)
    return CvSpec(folds=args.folds, seed=args.cv_seed)


def cmd_train(args) -> int:
    dataset = _load(args)
    dataset.require_both_classes()
    summary = {}
    if args.lam == "cv":
        result = cv_select_lambda(dataset, _config(args, dataset, 1.0), _cv_spec(args))
        lam = result.lambda_best
        summary["cv_mean_auc"] = {repr(k): v for k, v in result.mean_auc().items()}
    else:
        lam = float(args.lam)
    model = train(dataset, _config(args, dataset, lam))
    save_model(model, args.out)
    if args.trace_out:
        Path(args.trace_out).write_text(model.trace.to_jsonl())
    meta = model.train_meta
    summary = {
        "model": str(args.out),
        "model_type": model.model_type,
        "lambda": lam,
        "B": meta["B"],
        "epochs_run": meta["epochs_run"],
        "objective_final": meta["objective_final"],
        "stop_reason": meta["stop_reason"],
        "alpha": model.alpha,
        "train_auc": empirical_auc(predict_scores(model, dataset.features), dataset.labels),
        **summary,
    }
    _emit(summary)
    return 0


def _scores_for(args, model):
    drop = None if args.no_label else _label_column(args.label_col)
    return predict_scores(model, load_features(args.data, drop_column=drop))


def cmd_predict(args) -> int:
    scores = _scores_for(args, load_model(args.model))
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out)
        writer.writerow(["score"])
        for s in scores.tolist():
            writer.writerow([repr(s)])
    finally:
        if args.out:
            out.close()
    return 0


def cmd_evaluate(args) -> int:
    dataset = _load(args)
    if args.scores:
        scores = load_features(args.scores)[:, 0]
        if scores.size != dataset.n:
            raise DataError(f"{scores.size} scores for {dataset.n} labelled rows")
    elif args.model:
        scores = predict_scores(load_model(args.model), dataset.features)
    else:
        raise ValueError("evaluate needs --model or --scores")
    roc_path = args.roc_out or str(Path(args.data).with_suffix(".roc.csv"))
    roc_curve(scores, dataset.labels).to_csv(roc_path)
    metrics = {"auc": empirical_auc(scores, dataset.labels), "roc_csv_path": roc_path,
               "n": dataset.n, "n_pos": dataset.n_pos, "n_neg": dataset.n_neg}
    metrics.update(confusion_at(scores, dataset.labels, 0.0))
    _emit(metrics)
    return 0


def cmd_tune(args) -> int:
    dataset = _load(args)
    result = cv_select_lambda(dataset, _config(args, dataset, 1.0), _cv_spec(args))
    if args.out:
        result.to_csv(args.out)
    _emit({"lambda_best": result.lambda_best,
           "mean_auc": {repr(k): v for k, v in result.mean_auc().items()},
           "cv_csv_path": args.out})
    return 0


def cmd_bench(args) -> int:
    scenarios = ("linear", "radial") if args.scenario == "both" else (args.scenario,)
    cfg = bench_mod.BenchConfig(
        sizes=tuple(int(s) for s in args.sizes.split(",")), scenarios=scenarios,
        replications=args.reps, seed=args.seed, n_test=args.n_test, lam_linear=args.lambda_linear,
        lam_radial=args.lambda_radial, d=args.landmarks_d, full_max_n=args.full_max_n,
        exact_max_n=args.exact_max_n, max_n=args.max_n, cv=args.cv,
    )
    log = (lambda m: print(m, file=sys.stderr, flush=True)) if args.verbose else (lambda m: None)
    report = bench_mod.run_bench(cfg, worker_count(), log)
    if args.out_json:
        Path(args.out_json).write_text(report.to_json() + "\n")
    if args.out_csv:
        report.to_csv(args.out_csv)
    sys.stdout.write(report.to_json() + "\n")
    return 0


# -------------------------------------------------------------------- parser


def _data_args(p):
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", default="-1", help="label column name or index (default: last)")
    p.add_argument("--label-map", help='raw label mapping, e.g. "0:-1,1:1"')


def _train_args(p):
    _data_args(p)
    p.add_argument("--kernel", choices=["none", "rbf", "linear"], default="none")
    p.add_argument("--gamma", help="RBF bandwidth, a number or 'median' (default 1/p)")
    p.add_argument("--landmarks-d", type=int, default=300)
    p.add_argument("--landmark-strategy", choices=["uniform", "stratified", "kmeans"],
                   default="stratified")
    p.add_argument("--exact", action="store_true", help="exact kernel factor instead of Nystrom")
    p.add_argument("--exact-cap", type=int, default=2000)
    p.add_argument("--B", default="auto")
    p.add_argument("--optimizer", choices=["adamax", "constant"], default="adamax")
    p.add_argument("--eta", type=float)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--calibrate", default="spec:0.95")
    p.add_argument("--standardize", action="store_true")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--grid", help="comma-separated lambda grid for CV")
    p.add_argument("--cv-seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rocscale", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic dataset as CSV")
    g.add_argument("--scenario", choices=["linear", "radial"], required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--target-neg", type=float, default=0.8)
    g.add_argument("--offset", type=float, help="fixed offset instead of calibrating")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("train", help="fit a model and write it as JSON")
    _train_args(t)
    t.add_argument("--lambda", dest="lam", default="1e-2", help="ridge weight or 'cv'")
    t.add_argument("--out", default="model.json")
    t.add_argument("--trace-out", help="write the per-epoch trace as JSON lines")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="score rows of a CSV with a saved model")
    pr.add_argument("--model", required=True)
    pr.add_argument("--data", required=True)
    pr.add_argument("--label-col", default="-1")
    pr.add_argument("--no-label", action="store_true", help="the CSV has no label column")
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_predict)

    ev = sub.add_parser("evaluate", help="AUC and ROC curve on labelled data")
    _data_args(ev)
    ev.add_argument("--model")
    ev.add_argument("--scores", help="scores CSV written by predict")
    ev.add_argument("--roc-out")
    ev.set_defaults(func=cmd_evaluate)

    tu = sub.add_parser("tune", help="cross-validate lambda")
    _train_args(tu)
    tu.add_argument("--out", help="write the (fold, lambda, auc) table as CSV")
    tu.set_defaults(func=cmd_tune)

    b = sub.add_parser("bench", help="full vs incomplete and exact vs Nystrom comparison")
    b.add_argument("--scenario", choices=["linear", "radial", "both"], default="both")
    b.add_argument("--sizes", default="5000")
    b.add_argument("--reps", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--n-test", type=int, default=25_000)
    b.add_argument("--lambda-linear", type=float, default=1e-2)
    b.add_argument("--lambda-radial", type=float, default=1e-2)
    b.add_argument("--landmarks-d", type=int, default=300)
    b.add_argument("--full-max-n", type=int, default=2000)
    b.add_argument("--exact-max-n", type=int, default=2000)
    b.add_argument("--max-n", type=int, default=100_000)
    b.add_argument("--cv", action="store_true", help="select lambda by CV in every replication")
    b.add_argument("--out-json")
    b.add_argument("--out-csv")
    b.add_argument("--verbose", action="store_true")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with threadpool_limits(limits=worker_count()):
            return args.func(args)
    except ValueError as exc:
        # configuration values argparse cannot check (grids, targets, ...)
        parser.exit(2, f"rocscale {args.command}: error: {exc}\n")
    except (DataError, OSError) as exc:
        print(f"rocscale {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"rocscale {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
