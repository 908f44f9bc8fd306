"""Reference numbers for the two synthetic scenarios: calibrated offset, negative
fraction and population AUC of the true score, by Monte Carlo and by quadrature."""
import argparse

import numpy as np
from scipy import integrate, stats

from rocscale.data import Scenario, SyntheticSpec, calibrate_offset, mc_population_auc, true_score


def quad_auc(scenario, offset, grid_size=8001):
    if scenario is Scenario.LINEAR:
        grid = np.linspace(-15, 15, grid_size)
        dens = stats.norm.pdf(grid, scale=np.sqrt(2))
    else:
        grid = np.linspace(0, 80, grid_size)
        dens = stats.chi2.pdf(grid, 2)
    p_pos, p_neg = dens * stats.norm.cdf(offset + grid), dens * stats.norm.sf(offset + grid)
    cum_neg = integrate.cumulative_trapezoid(p_neg, grid, initial=0.0)
    w_pos, w_neg = integrate.trapezoid(p_pos, grid), integrate.trapezoid(p_neg, grid)
    return integrate.trapezoid(p_pos * cum_neg, grid) / (w_pos * w_neg), w_neg


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--target-neg", type=float, default=0.8)
    ap.add_argument("--mc", type=int, default=1_000_000)
    args = ap.parse_args()
    for scenario in Scenario:
        spec = SyntheticSpec(scenario, 10, seed=1, target_neg_fraction=args.target_neg)
        alpha = calibrate_offset(spec)
        auc, se = mc_population_auc(spec, lambda x: true_score(scenario, x), args.mc)
        q_auc, q_neg = quad_auc(scenario, alpha)
        print(f"{scenario.value:<7} offset {alpha:+.6f}  neg fraction {q_neg:.4f}  "
              f"AUC mc {auc:.5f} ({se:.5f})  quadrature {q_auc:.5f}")


if __name__ == "__main__":
    main()
