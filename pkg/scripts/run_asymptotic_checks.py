#!/usr/bin/env python3
"""Empirical large-sample behavior of the statistics.

Four experiments:

1. Null quantile of the uncorrected statistic under constant variance;
   it should approach the Brownian-bridge supremum quantile (1.3581).
2. Null quantile of the corrected statistic when the variance profile
   is estimated from the same sample; the fit orthogonalizes the
   partial sums against its trend space, so this sits well BELOW the
   bridge quantile.  The critical value 1.33 is therefore conservative
   for the corrected test.
3. The uncorrected statistic under a smoothly drifting variance grows
   like sqrt(n): its median divided by sqrt(n) stabilizes, which is why
   the uncorrected test eventually always rejects.
4. Under a genuine level shift the corrected statistic grows with n.
"""

import argparse
import math
import sys
import time

import numpy as np

from varbreak import (
    DecisionRule,
    McExperimentSpec,
    ResidualSeries,
    SubsampleWindow,
    VariancePathSpec,
    fit_variance_poly,
    kolmogorov_quantile,
    run_experiment,
    sample_innovations,
    simulate_dgp1,
    statistic_corrected,
    statistic_sanso,
    stream,
)


def spec_for(n: int, alpha: float, reps: int, seed: int) -> McExperimentSpec:
    return McExperimentSpec(
        dgp="dgp1",
        n=n,
        replications=reps,
        path=VariancePathSpec(n=n, alpha=alpha),
        seed=seed,
        decision=DecisionRule.fixed_boundary(),
        keep_statistics=True,
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=2000)
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=12345)
    args = parser.parse_args()
    target = kolmogorov_quantile(0.95)
    print(f"Brownian-bridge supremum q95 = {target:.4f}\n")

    start = time.time()
    stats = [
        statistic_sanso(ResidualSeries(sample_innovations(args.n, stream(args.seed, rep))))
        for rep in range(args.reps)
    ]
    q95 = np.quantile(stats, 0.95)
    print(f"1. constant variance, uncorrected: q95 = {q95:.4f} [{time.time() - start:.0f}s]")

    start = time.time()
    window = SubsampleWindow.full(args.n)
    stats = []
    for rep in range(args.reps):
        series = simulate_dgp1(spec_for(args.n, 0.0, args.reps, args.seed + 1), rep)
        fit = fit_variance_poly(series, window, 3)
        stats.append(statistic_corrected(series, window, fit, positivity="none"))
    q95 = np.quantile(stats, 0.95)
    print(
        f"2. smooth variance, corrected (fitted cubic profile): q95 = {q95:.4f} "
        f"(detrending shifts the null well below {target:.3f}) [{time.time() - start:.0f}s]"
    )

    start = time.time()
    print("3. sqrt-n divergence of the uncorrected statistic under smooth variance:")
    for n in (200, 400, 800):
        result = run_experiment(spec_for(n, 0.0, 500, args.seed + 2))
        median = np.median(result.statistics_std) / math.sqrt(n)
        print(f"   n={n:4d}: median/sqrt(n) = {median:.4f}")
    print(f"   [{time.time() - start:.0f}s]")

    start = time.time()
    print("4. growth of the corrected statistic under a level shift (alpha=5):")
    for n in (100, 200, 400):
        result = run_experiment(spec_for(n, 5.0, 500, args.seed + 3))
        print(f"   n={n:4d}: median = {np.median(result.statistics_mod):.4f}")
    print(f"   [{time.time() - start:.0f}s]")
    return 0


if __name__ == "__main__":
    sys.exit(main())
