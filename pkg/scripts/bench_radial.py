"""Radial scenario: RBF kernel on the exact factor vs a d-landmark Nystrom map.

    python3 scripts/bench_radial.py --sizes 1000,2000,5000 --reps 10 --out results/radial
"""
import argparse
import sys
from pathlib import Path

from rocscale.bench import BenchConfig, run_bench


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,2000,5000")
    ap.add_argument("--reps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n-test", type=int, default=25_000)
    ap.add_argument("--lam", type=float, default=1e-2)
    ap.add_argument("--d", type=int, default=300)
    ap.add_argument("--exact-max-n", type=int, default=2000,
                    help="largest n for the exact kernel factor (n x n eigendecomposition)")
    ap.add_argument("--out", default="results/radial")
    args = ap.parse_args(argv)

    cfg = BenchConfig(sizes=tuple(int(s) for s in args.sizes.split(",")), scenarios=("radial",),
                      replications=args.reps, seed=args.seed, n_test=args.n_test, lam_radial=args.lam,
                      d=args.d, exact_max_n=args.exact_max_n)
    report = run_bench(cfg, log=lambda m: print(m, file=sys.stderr, flush=True))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.with_suffix(".json").write_text(report.to_json() + "\n")
    report.to_csv(out.with_suffix(".csv"))

    print(f"{'n':>7} {'method':<20} {'time s':>14} {'AUC %':>16}")
    for r in report.rows:
        if r.status != "ok":
            print(f"{r.n_train:>7} {r.method:<20} {'--':>14} {'--':>16}")
            continue
        print(f"{r.n_train:>7} {r.method:<20} {r.mean_time_s:>7.3f} ({r.se_time_s:.3f}) "
              f"{100 * r.mean_auc:>8.3f} ({100 * r.se_auc:.2f})")


if __name__ == "__main__":
    main()
