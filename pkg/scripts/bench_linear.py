"""Linear scenario: full pair set vs B = n sampled pairs, over several training sizes.

    python3 scripts/bench_linear.py --sizes 1000,2000,5000,10000 --reps 10 --out results/linear
"""
import argparse
import sys
from pathlib import Path

from rocscale.bench import BenchConfig, run_bench


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,2000,5000,10000")
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-test", type=int, default=25_000)
    ap.add_argument("--lam", type=float, default=1e-2)
    ap.add_argument("--cv", action="store_true", help="choose lambda by 5-fold CV in every replication")
    ap.add_argument("--full-max-n", type=int, default=2000, help="largest n for the full-pair fit")
    ap.add_argument("--out", default="results/linear", help="output prefix for .json and .csv")
    args = ap.parse_args(argv)

    cfg = BenchConfig(sizes=tuple(int(s) for s in args.sizes.split(",")), scenarios=("linear",),
                      replications=args.reps, seed=args.seed, n_test=args.n_test, lam_linear=args.lam,
                      full_max_n=args.full_max_n, cv=args.cv)
    report = run_bench(cfg, log=lambda m: print(m, file=sys.stderr, flush=True))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".json").write_text(report.to_json() + "\n")
    report.to_csv(out.with_suffix(".csv"))

    print(f"{'n':>7} {'method':<12} {'time s':>14} {'AUC %':>16}")
    for r in report.rows:
        if r.status != "ok":
            print(f"{r.n_train:>7} {r.method:<12} {'--':>14} {'--':>16}")
            continue
        print(f"{r.n_train:>7} {r.method:<12} {r.mean_time_s:>7.3f} ({r.se_time_s:.3f}) "
              f"{100 * r.mean_auc:>8.3f} ({100 * r.se_auc:.2f})")


if __name__ == "__main__":
    main()
