#!/usr/bin/env python3
"""The move count and its closed forms.

E(moves after n steps) solves a one-step recurrence whose solution is the
gamma ratio Gamma(n+1-r) / (Gamma(2-r) Gamma(n)) ~ n^(1-r) / Gamma(2-r): the
walker keeps moving forever for every r < 1, just more and more rarely.
This script compares ensemble means against the formula and prints the
normalizer table behind the martingale analysis.
"""

import numpy as np

import merw
from merw.ensemble import EnsembleConfig, run_ensemble

print("expected moves E Z*_n = Gamma(n+1-r)/(Gamma(2-r) Gamma(n))")
print(f"{'r':>5} {'n=10':>10} {'n=1e3':>12} {'n=1e6':>14}")
for r in (0.0, 0.3, 0.5, 0.8, 1.0):
    row = [merw.expected_moves(r, n) for n in (10, 1000, 1_000_000)]
    print(f"{r:>5} {row[0]:>10.3f} {row[1]:>12.2f} {row[2]:>14.1f}")
print()

# Monte-Carlo check at r = 0.3: 2000 replicas to n = 200
params = merw.validate_params(d=2, p=0.4, r=0.3)
cfg = EnsembleConfig(params=params, variant="stops", n=200, replicas=2000, master_seed=11)
summary = run_ensemble(cfg)
expected = merw.expected_moves(0.3, summary.checkpoints)
se = np.sqrt(summary.variance("moves") / summary.replicas)
print("ensemble mean vs formula (2000 replicas)")
print(f"{'n':>5} {'mean':>9} {'formula':>9} {'z':>6}")
for j, cp in enumerate(summary.checkpoints):
    mean = summary.mean("moves")[j]
    z = 0.0 if se[j] == 0 else (mean - expected[j]) / se[j]
    print(f"{cp:>5} {mean:>9.3f} {expected[j]:>9.3f} {z:>6.2f}")
print()

# the normalizer sequence a_n and the partial sums u_n of 1/a_k^2
table = merw.normalizer_table(0.3, 10)
print("normalizers a_1..a_10 at r=0.3:", np.round(table.a, 4))
print("partial sums u_0..u_9:         ", np.round(table.u, 4))
print()

# u_n converges (r < 1/2), grows like log n (r = 1/2) or like a power (r > 1/2)
for r in (0.3, 0.5, 0.8):
    lim = merw.u_limit(r)
    print(f"r={r}: u-series regime {lim.regime!r}, normalizer {lim.normalizer}, "
          f"constant {lim.constant:.7f}")
hyp = merw.hyp3f2_unit(0.3)
print(f"\nthe r=0.3 limit is the unit-argument hypergeometric value "
      f"{hyp.value:.12f} (error bound {hyp.error_bound:.1e}, {hyp.terms} terms)")

# limit moments of the normalized move count in the super-critical regime
print("\nlimit moments of Z*_n/a_n at r=0.3:",
      [round(merw.limit_moment(0.3, m), 5) for m in (1, 2, 3, 4)])
