#!/usr/bin/env python3
"""Limit theorems at desk scale: LLN ladders, the quadratic strong law, and
iterated-logarithm envelopes.

Almost-sure limits only bind asymptotically, so each demonstration prints
the finite-n picture: normalized statistics along a geometric ladder, the
slow Cesaro convergence of the quadratic strong law (its finite-n bias is
visible and quantified), and running sups against the envelope bounds.
"""

import math

import numpy as np

import merw
from merw.analytics import centered_moves_series, lil_bound_stops
from merw.ensemble import EnsembleConfig, map_seeded, run_ensemble

ladder = (100, 1000, 10_000, 100_000)

# stops: three regimes, three normalizations
print("stops variant: mean normalized move count along the ladder")
for r, label, norm in [
    (0.8, "sub-critical  Z*/n^r       -> 0", lambda z, n: z / n**0.8),
    (0.5, "critical      Z*/(rt(n)log) -> 0", lambda z, n: z / (math.sqrt(n) * math.log(n))),
    (0.3, "super-critical Z*/a_n       -> Z", lambda z, n: z / merw.expected_moves(0.3, n)),
]:
    cfg = EnsembleConfig(
        params=merw.validate_params(2, min(0.2, 1 - r), r), variant="stops",
        n=ladder[-1], replicas=300, master_seed=31, checkpoints=ladder,
    )
    s = run_ensemble(cfg)
    vals = [float(np.mean(norm(s.moves[:, j], cp))) for j, cp in enumerate(ladder)]
    print(f"  r={r}  {label}: " + "  ".join(f"{v:.4f}" for v in vals))
print("  (the super-critical limit has mean 1 and second moment"
      f" {merw.limit_moment(0.3, 2):.4f})")
print()

# random steps: the move fraction obeys the strong law with limit 1 - b
sizes = merw.StepSizeModel(later=merw.ZeroInflatedPointMass(b=0.3, value=1.0))
cfg = EnsembleConfig(
    params=merw.validate_params(2, 0.5, 0.0), variant="random-steps", sizes=sizes,
    n=ladder[-1], replicas=300, master_seed=32, checkpoints=ladder,
)
s = run_ensemble(cfg)
print("random steps: mean move fraction vs 1-b = 0.7:",
      [round(float(np.mean(s.moves[:, j] / cp)), 5) for j, cp in enumerate(ladder)])
print()

# quadratic strong law for the move count: slow log-speed Cesaro convergence
n, paths, b = 100_000, 50, 0.3
def qsl_one(rng):
    moves = merw.moves_series_random_steps(sizes, n, rng)
    series = centered_moves_series(np.arange(1, n + 1), moves, b)
    return merw.qsl_statistic(series, n)

stats = np.asarray(map_seeded(33, paths, qsl_one))
k = np.arange(1, n + 1, dtype=float)
finite_mean = float(np.sum((1 + (k - 1) * b * (1 - b)) / (k * (k + 1))) / math.log(n + 1))
print("quadratic strong law for moves (limit b(1-b) = 0.21):")
print(f"  mean statistic over {paths} paths at n=1e5: {stats.mean():.4f}")
print(f"  exact finite-n expectation:                 {finite_mean:.4f}")
print("  the +1/log(n+1) first-step offset dominates until astronomically large n")
print()

# iterated-logarithm envelopes: running sups stay under bound + margin
r = 0.8
params = merw.validate_params(2, 0.1, r)
def lil_one(rng):
    moves = merw.moves_series_stops(params, 1_000_000, rng)
    return merw.lil_statistic(moves, "stops-subcritical", r=r).sup

sups = np.asarray(map_seeded(34, 25, lil_one))
bound = lil_bound_stops(r)
print(f"iterated logarithm, stops r=0.8: bound 1/sqrt(2r-1) = {bound:.3f}")
print(f"  running sups over 25 paths to n=1e6: max {sups.max():.3f}, "
      f"median {np.median(sups):.3f}")
print(f"  fraction within bound + 0.5: {np.mean(sups <= bound + 0.5):.2f}")
