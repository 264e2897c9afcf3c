"""Sparse recovery for underdetermined linear models.

Dantzig selector, basis pursuit and Gauss-Dantzig estimators on a dense
interior-point LP solver, plus restricted-isometry probes, a collinearity
simulator and synthetic risk benchmarks.
"""
__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .linalg import (cholesky_solve, column_standardize, matmul, pearson_correlation,
                     pseudo_inverse_ls, qr_least_squares, symmetric_eigen_extremes)
from .lp import LinearProgram, LpSolution, LpStatus, SolverOptions, feasibility_check, solve_lp
from .estimators import (DantzigOptions, Estimate, LambdaMode, RegressionProblem,
                         basis_pursuit, dantzig_selector, default_lambda, gauss_dantzig,
                         lasso_cd, ols_on_support, soft_threshold, support_of)
from .rip import (GroupCorrReport, RipReport, first_canonical_correlation,
                  max_canonical_correlation_sampled, restricted_isometry_exact,
                  restricted_isometry_sampled)
from .collinearity import (MaxCorrDistribution, SimConfig, histogram,
                           max_pairwise_abs_correlation, simulate_max_abs_correlation)
from .risk import (SyntheticSpec, compare_bias, generate_synthetic, ideal_risk,
                   run_risk_sweep)
