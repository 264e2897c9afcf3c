"""Sparse regression estimators for ``y = X beta + noise`` with ``p >> n``.

The Dantzig selector and basis pursuit are posed as linear programs over the
pair ``(beta, u)`` with ``|beta_j| <= u_j`` and solved by :mod:`dantzig.lp`.
"""
import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (ConfigError, DimensionMismatch, InfeasibleProblem,
                     InternalInconsistency, IterationLimit, RankDeficient)
from .linalg import (as_matrix, as_vector, column_norms, column_standardize,
                     pseudo_inverse_ls, qr_least_squares)
from .lp import LinearProgram, LpStatus, SolverOptions, feasibility_check, solve_lp

__all__ = [
    "RegressionProblem", "LambdaMode", "DantzigOptions", "Estimate",
    "default_lambda", "soft_threshold", "support_of", "dantzig_selector",
    "dantzig_lp", "basis_pursuit", "ols_on_support", "gauss_dantzig", "lasso_cd",
]

# tolerance for "columns already have unit norm"
_UNIT_NORM_TOL = 1e-8
# feasibility tolerance for LP solutions handed back to callers
_FEAS_TOL = 1e-6


@dataclass
class RegressionProblem:
    """Design ``X`` (n x p), response ``y`` and known noise level ``sigma``.

    With ``standardize=True`` (the default) the columns of ``X`` are rescaled
    to unit Euclidean norm on construction and ``standardized`` is set. Note
    that coefficients are then on the scale of the standardized design.
    """

    X: np.ndarray
    y: np.ndarray
    sigma: float = 1.0
    standardize: bool = True
    standardized: bool = field(init=False, default=False)

    def __post_init__(self):
        self.X = as_matrix(self.X, "X")
        self.y = as_vector(self.y, "y")
        if self.y.shape[0] != self.X.shape[0]:
            raise DimensionMismatch("y length must equal the number of rows of X")
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError("sigma must be a finite non-negative number")
        if self.standardize:
            self.X = column_standardize(self.X)
        self.standardized = bool(np.all(np.abs(column_norms(self.X) - 1.0) <= _UNIT_NORM_TOL))

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def p(self):
        return self.X.shape[1]


class LambdaMode(str, Enum):
    SQRT_2LOG_P = "sqrt_2logp"
    SQRT_2LOG_N = "sqrt_2logn"
    CUSTOM = "custom"


@dataclass
class DantzigOptions:
    lambda_mode: LambdaMode = LambdaMode.SQRT_2LOG_P
    lambda_value: float = None          # used when lambda_mode is CUSTOM
    support_threshold: float = 1e-4
    solver: SolverOptions = field(default_factory=SolverOptions)
    allow_unstandardized: bool = False

    def __post_init__(self):
        self.lambda_mode = LambdaMode(self.lambda_mode)
        if self.lambda_mode is LambdaMode.CUSTOM:
            if self.lambda_value is None or not self.lambda_value > 0:
                raise ConfigError("custom lambda must be positive")
        if not 0 < self.support_threshold < 1:
            raise ConfigError("support_threshold must lie in (0, 1)")

    @classmethod
    def custom(cls, value, **kwargs):
        return cls(lambda_mode=LambdaMode.CUSTOM, lambda_value=float(value), **kwargs)

    def resolve(self, n, p):
        """Regularization factor (multiplying sigma) for an n x p problem."""
        if self.lambda_mode is LambdaMode.SQRT_2LOG_P:
            return default_lambda(p)
        if self.lambda_mode is LambdaMode.SQRT_2LOG_N:
            return default_lambda(n)
        return self.lambda_value


@dataclass
class Estimate:
    beta: np.ndarray
    support: np.ndarray
    residual: np.ndarray
    method: str
    lambda_used: float = None
    lp_stats: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    first_stage: np.ndarray = None

    @property
    def l1_norm(self):
        return float(np.sum(np.abs(self.beta)))


def default_lambda(p):
    """``sqrt(2 log p)`` with the natural logarithm."""
    if p < 2:
        raise ValueError("default_lambda needs p >= 2")
    return math.sqrt(2.0 * math.log(p))


def soft_threshold(t, level):
    t = np.asarray(t, dtype=float)
    return np.sign(t) * np.maximum(np.abs(t) - level, 0.0)


def support_of(beta, relative_threshold=1e-4):
    """Indices with ``|beta_j| > relative_threshold * max|beta|``."""
    if not 0 < relative_threshold < 1:
        raise ValueError("relative_threshold must lie in (0, 1)")
    beta = np.asarray(beta, dtype=float)
    top = np.max(np.abs(beta), initial=0.0)
    if top == 0:
        return np.zeros(0, dtype=int)
    return np.flatnonzero(np.abs(beta) > relative_threshold * top)


def _make_estimate(X, y, beta, method, threshold=1e-4, **kw):
    return Estimate(beta=beta, support=support_of(beta, threshold),
                    residual=y - X @ beta, method=method, **kw)


def dantzig_lp(X, y, bound):
    """LP over ``(beta, u)`` encoding ``min sum(u)`` s.t. ``|beta| <= u`` and
    ``|X'(y - X beta)| <= bound`` componentwise (2p variables, 4p rows)."""
    p = X.shape[1]
    XtX = X.T @ X
    Xty = X.T @ y
    I = np.eye(p)
    Z = np.zeros((p, p))
    G = np.block([[I, -I], [-I, -I], [-XtX, Z], [XtX, Z]])
    h = np.concatenate([np.zeros(2 * p), bound - Xty, bound + Xty])
    c = np.concatenate([np.zeros(p), np.ones(p)])
    return LinearProgram(c=c, G=G, h=h)


def dantzig_selector(prob, opts=None):
    """Dantzig selector: minimize ``||beta||_1`` s.t. ``||X'(y - X beta)||_inf <= lambda*sigma``.

    ``lambda`` is resolved from ``opts.lambda_mode`` (``sqrt(2 log p)`` by
    default). When ``beta = 0`` is already feasible it is returned without
    calling the LP solver.
    """
    opts = opts or DantzigOptions()
    if not prob.sigma > 0:
        raise ConfigError("dantzig_selector needs sigma > 0; use basis_pursuit for noiseless data")
    if not (prob.standardized or opts.allow_unstandardized):
        raise ConfigError("design is not column-standardized; set allow_unstandardized to override")
    X, y = prob.X, prob.y
    lam = opts.resolve(prob.n, prob.p)
    bound = lam * prob.sigma
    corr = X.T @ y
    if np.max(np.abs(corr)) <= bound:
        beta = np.zeros(prob.p)
        return _make_estimate(X, y, beta, "dantzig", opts.support_threshold,
                              lambda_used=lam, lp_stats={"status": "ZeroFeasible", "iterations": 0,
                                                         "constraint_residual": float(np.max(np.abs(corr)) - bound)})
    lp = dantzig_lp(X, y, bound)
    sol = solve_lp(lp, opts.solver)
    if sol.status is not LpStatus.OPTIMAL:
        if sol.status is LpStatus.ITERATION_LIMIT:
            raise IterationLimit("Dantzig LP hit the iteration limit", result=sol)
        raise InternalInconsistency(f"Dantzig LP reported {sol.status.value} although it is feasible")
    feas = feasibility_check(lp, sol.x, _FEAS_TOL)
    if not feas.feasible:
        raise InternalInconsistency(f"Dantzig LP solution violates constraints by {feas.max_violation:g}")
    beta = sol.x[:prob.p].copy()
    est = _make_estimate(X, y, beta, "dantzig", opts.support_threshold, lambda_used=lam)
    stats = sol.summary()
    stats["constraint_residual"] = float(np.max(np.abs(X.T @ est.residual)) - bound)
    stats["max_violation"] = feas.max_violation
    stats["nonzeros"] = int(np.count_nonzero(np.abs(beta) > 1e-8))
    est.lp_stats = stats
    return est


def basis_pursuit(X, y, solver=None, support_threshold=1e-4):
    """Minimum-l1-norm exact solution of ``X beta = y``.

    Raises
    ------
    InfeasibleProblem
        If ``y`` is not in the column space of ``X`` (relative residual above 1e-8).
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    if y.shape[0] != n:
        raise DimensionMismatch("y length must equal the number of rows of X")
    resid = float(np.linalg.norm(X @ pseudo_inverse_ls(X, y) - y))
    if resid > 1e-8 * (1.0 + float(np.linalg.norm(y))):
        raise InfeasibleProblem(f"y is not in the column space of X (residual {resid:g})", resid)
    I = np.eye(p)
    lp = LinearProgram(
        c=np.concatenate([np.zeros(p), np.ones(p)]),
        A=np.hstack([X, np.zeros((n, p))]), b=y,
        G=np.block([[I, -I], [-I, -I]]), h=np.zeros(2 * p))
    sol = solve_lp(lp, solver)
    if sol.status is not LpStatus.OPTIMAL:
        if sol.status is LpStatus.ITERATION_LIMIT:
            raise IterationLimit("basis pursuit LP hit the iteration limit", result=sol)
        raise InfeasibleProblem(f"basis pursuit LP reported {sol.status.value}", resid)
    beta = sol.x[:p].copy()
    stats = sol.summary()
    stats["max_violation"] = feasibility_check(lp, sol.x).max_violation
    return _make_estimate(X, y, beta, "basis_pursuit", support_threshold, lp_stats=stats)


def ols_on_support(X, y, support):
    """Least squares restricted to ``support``; zero elsewhere.

    An empty support returns the zero vector.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    support = np.unique(np.asarray(support, dtype=int))
    beta = np.zeros(p)
    if support.size == 0:
        return beta
    if support.size > n:
        raise RankDeficient(f"support of size {support.size} exceeds n = {n}")
    beta[support] = qr_least_squares(X[:, support], y)
    return beta


def gauss_dantzig(prob, opts=None, first_stage=None):
    """Two-stage estimator: Dantzig selector for selection, then OLS refit.

    If the selected support is larger than ``n`` it is truncated to the ``n``
    largest first-stage coefficients and a warning is recorded. A previously
    computed Dantzig estimate for the same problem may be passed as
    ``first_stage`` to skip the LP solve.
    """
    opts = opts or DantzigOptions()
    first = first_stage if first_stage is not None else dantzig_selector(prob, opts)
    support = first.support
    notes = []
    if support.size > prob.n:
        order = np.argsort(-np.abs(first.beta[support]), kind="stable")
        support = np.sort(support[order[:prob.n]])
        msg = f"support of size {first.support.size} truncated to n = {prob.n}"
        notes.append(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
    beta = ols_on_support(prob.X, prob.y, support)
    est = Estimate(beta=beta, support=support, residual=prob.y - prob.X @ beta,
                   method="gauss_dantzig", lambda_used=first.lambda_used,
                   lp_stats=first.lp_stats, warnings=notes, first_stage=first.beta)
    return est


def lasso_cd(prob, lam, max_pass=1000, tol=1e-10):
    """Cyclic coordinate descent for ``0.5||y - X beta||^2 + lam ||beta||_1``.

    Stops when the largest coefficient change over a full pass is below
    ``tol``. Raises :class:`IterationLimit` (with the last estimate attached)
    after ``max_pass`` passes.
    """
    if lam < 0:
        raise ValueError("lambda must be non-negative")
    X, y = prob.X, prob.y
    p = prob.p
    sq = np.sum(X * X, axis=0)
    beta = np.zeros(p)
    r = y.copy()
    for npass in range(1, max_pass + 1):
        delta = 0.0
        for j in range(p):
            if sq[j] == 0:
                continue
            old = beta[j]
            rho = X[:, j] @ r + sq[j] * old
            new = math.copysign(max(abs(rho) - lam, 0.0), rho) / sq[j]
            if new != old:
                r -= X[:, j] * (new - old)
                beta[j] = new
                delta = max(delta, abs(new - old))
        if delta < tol:
            est = _make_estimate(X, y, beta, "lasso", lambda_used=lam)
            est.lp_stats = {"passes": npass}
            return est
    est = _make_estimate(X, y, beta, "lasso", lambda_used=lam)
    est.lp_stats = {"passes": max_pass}
    raise IterationLimit(f"lasso did not converge in {max_pass} passes", result=est)
