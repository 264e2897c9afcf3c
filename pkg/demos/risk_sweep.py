"""Risk of the Dantzig selector and lasso across regularization factors."""
import numpy as np

from dantzig.risk import SyntheticSpec, compare_bias, run_risk_sweep

spec = SyntheticSpec(n=72, p=256, S=8, sigma=1.0, amplitude=5.0)
grid = [1.0, 2.0, 3.0, 4.0]
rep = run_risk_sweep(spec, grid, methods=["DS", "GaussDantzig", "Lasso"], reps=10, seed=0)

print(f"ideal risk {rep.rows[0]['ideal_risk']:.2f}, zero estimate {rep.zero_estimate_risk:.2f}")
print(f"{'method':14s}{'factor':>8s}{'risk':>10s}{'ratio':>8s}  flags")
for r in rep.rows:
    flags = " ".join(x for x in (r["canonical"], "argmin" if r["empirical_argmin"] else "") if x)
    print(f"{r['method']:14s}{r['lambda_factor']:8.3f}{r['risk']:10.2f}{r['ratio']:8.2f}  {flags}")

bias = compare_bias(spec, reps=10, seed=0)
print(f"mean l2 error: DS {bias.ds_mean_error:.3f}, Gauss-Dantzig {bias.gd_mean_error:.3f}")
print(f"Gauss-Dantzig better in {100 * bias.win_rate:.0f}% of reps")
print(f"signed bias on support: DS {bias.ds_signed_bias:+.3f}, GD {bias.gd_signed_bias:+.3f}")
print("paired differences:", np.round(bias.gd_errors - bias.ds_errors, 2))
