"""How far a design is from an isometry on sparse vectors."""
import math

import numpy as np

from dantzig.errors import BudgetExceeded
from dantzig.rip import (first_canonical_correlation, max_canonical_correlation_sampled,
                         restricted_isometry_exact, restricted_isometry_sampled)

rng = np.random.default_rng(3)
X = rng.standard_normal((30, 50))
X /= np.linalg.norm(X, axis=0)

for S in (1, 2, 3):
    rep = restricted_isometry_exact(X, S)
    print(f"delta_{S} = {rep.delta:.4f} over {rep.subsets_checked} subsets, worst {rep.worst_subset}")

# sampling gives lower bounds that creep up with more trials
for trials in (10, 100, 1000, 10000):
    print(trials, "trials:", round(restricted_isometry_sampled(X, 4, trials, seed=7).delta, 4))

# exact enumeration stops being feasible very quickly
try:
    restricted_isometry_exact(X, 8)
except BudgetExceeded as exc:
    print(exc)
print("C(1000, 8) =", f"{math.comb(1000, 8):.3e}")

# canonical correlation between a 3-column and a 5-column group
print("rho(first 3, next 5) =", round(first_canonical_correlation(X, [0, 1, 2], [3, 4, 5, 6, 7]), 4))
rep = max_canonical_correlation_sampled(X, 3, 5, trials=500, seed=7)
print("max over 500 random group pairs:", round(rep.rho, 4), rep.group_a, rep.group_b)
