#!/usr/bin/env python3
"""The three martingales and their drift/variation checks.

Z*_n / a_n (stops), Z*_n - (n-1)(1-b) (random-steps move count), and
S_n - mu W_n (random-steps position) are martingales; their cross-replica
mean increments should vanish and the squared position increments should
match the declared variation budget.
"""

import numpy as np

import merw
from merw.analytics import CENTERED_MOVES, MULTIPLICATIVE_MOVES, POSITION
from merw.ensemble import EnsembleConfig, run_ensemble
from merw.stattests import test_martingale_drift, test_variation_identity

replicas = 4000

cfg = EnsembleConfig(
    params=merw.validate_params(2, 0.4, 0.3), variant="stops",
    n=1000, replicas=replicas, master_seed=21,
    martingales=(MULTIPLICATIVE_MOVES,),
)
summary = run_ensemble(cfg)
series = summary.martingales[MULTIPLICATIVE_MOVES]
print("multiplicative moves martingale Z*_n / a_n (mean should stay 1):")
print("  checkpoints:", summary.checkpoints.tolist())
print("  mean series:", np.round(np.mean(series, axis=0), 4).tolist())
rep = test_martingale_drift(summary, MULTIPLICATIVE_MOVES)
print(f"  drift check: {rep.verdict} (max |z| = {rep.details['max_abs_z']:.2f})")
print()

sizes = merw.StepSizeModel(later=merw.ZeroInflatedPointMass(b=0.3, value=1.0))
cfg = EnsembleConfig(
    params=merw.validate_params(2, 0.5, 0.0), variant="random-steps", sizes=sizes,
    n=1000, replicas=replicas, master_seed=22,
    martingales=(CENTERED_MOVES,),
)
summary = run_ensemble(cfg)
rep = test_martingale_drift(summary, CENTERED_MOVES)
print("centered move-count martingale Z*_n - (n-1)(1-b):")
print(f"  drift check: {rep.verdict} (max |z| = {rep.details['max_abs_z']:.2f})")
print()

# position martingale with dense checkpoints: increments have E||dM||^2 = eta^2
sizes = merw.StepSizeModel(later=merw.ZeroInflatedPointMass(b=0.5, value=1.0))
n = 50
cfg = EnsembleConfig(
    params=merw.validate_params(2, 0.5, 0.0), variant="random-steps", sizes=sizes,
    n=n, replicas=replicas, master_seed=23,
    checkpoints=tuple(range(1, n + 1)), martingales=(POSITION,),
)
summary = run_ensemble(cfg)
rep = test_variation_identity(summary, sizes)
print("position martingale S_n - mu W_n, zero-inflated sizes (eta^2 = 0.25):")
print(f"  mean squared increment: {rep.observed['increment_sq']:.4f}")
print(f"  cumulative variation:   {rep.observed['cumulative']:.3f} "
      f"(budget {rep.null_value['cumulative']:.3f} = eta1^2 + (mu-mu1)^2 + (n-1) eta^2)")
print(f"  verdict: {rep.verdict}")
print()

# the conditional covariance of the next unit step interpolates between the
# occupation profile (full memory) and the uniform law
sig = summary.mean("sigma_diag")[-1]
cov = merw.conditional_step_covariance(sig, n=n, d=2, p=0.5)
print("conditional next-step covariance from the mean occupation profile:")
print(np.round(cov, 4))
