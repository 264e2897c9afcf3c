"""Dantzig selector, Gauss-Dantzig, lasso and basis pursuit on one problem."""
import numpy as np

from dantzig import (DantzigOptions, RegressionProblem, basis_pursuit, dantzig_selector,
                     default_lambda, gauss_dantzig, lasso_cd)
from dantzig.risk import SyntheticSpec, generate_synthetic

spec = SyntheticSpec(n=72, p=256, S=8, sigma=1.0, amplitude=5.0, signs="random")
prob, beta = generate_synthetic(spec, seed=1)
true_support = np.flatnonzero(beta)
print("true support:", true_support)

lam = default_lambda(spec.p)
print(f"lambda = sqrt(2 log p) = {lam:.4f}")

ds = dantzig_selector(prob)
print("DS support:", ds.support, " LP iterations:", ds.lp_stats["iterations"])
print("DS constraint slack:", -ds.lp_stats["constraint_residual"])

# the selector is biased toward zero; refitting on its support removes most of that
gd = gauss_dantzig(prob, first_stage=ds)
la = lasso_cd(prob, lam * prob.sigma)
for name, est in [("dantzig", ds), ("gauss-dantzig", gd), ("lasso", la)]:
    err = np.linalg.norm(est.beta - beta)
    shrink = np.mean(np.sign(beta[true_support]) * (est.beta - beta)[true_support])
    print(f"{name:14s} l2 error {err:7.3f}   mean signed bias on support {shrink:+.3f}")

# larger lambda, smaller l1 norm
for factor in (1.0, 2.0, lam, 4.0, 6.0):
    est = dantzig_selector(prob, DantzigOptions.custom(factor))
    print(f"factor {factor:5.2f}: |support| = {est.support.size:3d}, l1 = {est.l1_norm:7.3f}")

# noiseless data: basis pursuit recovers the sparse vector exactly
rng = np.random.default_rng(0)
X = rng.standard_normal((40, 80))
X /= np.linalg.norm(X, axis=0)
b = np.zeros(80)
b[[5, 33, 71]] = [1.0, -1.0, 1.0]
bp = basis_pursuit(X, X @ b)
print("basis pursuit max error:", np.max(np.abs(bp.beta - b)))

# an orthonormal design turns the selector into soft thresholding
Q, _ = np.linalg.qr(rng.standard_normal((16, 16)))
y = Q @ np.r_[np.full(3, 4.0), np.zeros(13)] + rng.standard_normal(16)
est = dantzig_selector(RegressionProblem(Q, y))
st = np.sign(Q.T @ y) * np.maximum(np.abs(Q.T @ y) - default_lambda(16), 0)
print("orthonormal design, max |DS - soft threshold|:", np.max(np.abs(est.beta - st)))
