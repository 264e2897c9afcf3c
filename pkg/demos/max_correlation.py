"""Spurious correlation among independent Gaussian predictors grows with p.

Writes a small text histogram; the CSV output of ``dantzig corrsim`` is the
thing to feed a plotting tool.
"""
import numpy as np

from dantzig.collinearity import SimConfig, rank_shift_test, simulate_max_abs_correlation

dists = {}
for p in (10, 100, 1000, 5000):
    cfg = SimConfig(n=60, p=p, reps=40, seed=7, bins=12)
    dists[p] = d = simulate_max_abs_correlation(cfg)
    print(f"p = {p:5d}: median max|corr| {d.summary['median']:.3f} "
          f"(range {d.summary['min']:.3f} .. {d.summary['max']:.3f})")

d = dists[5000]
for left, right, count in zip(d.bin_edges[:-1], d.bin_edges[1:], d.counts):
    print(f"[{left:.3f}, {right:.3f}) {'#' * int(count)}")

stat, pval = rank_shift_test(dists[1000].samples, dists[5000].samples)
print(f"one-sided rank test p = 1000 vs 5000: U = {stat:.0f}, p-value {pval:.2e}")
