"""Synthetic risk experiments for the sparse estimators.

All experiments use common random numbers: replication ``r`` draws its
``(X, y, beta)`` from the generator seeded by ``(seed, r)``, and every method
and regularization factor in a sweep is evaluated on that same data.
"""
import hashlib
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigError, IterationLimit
from .estimators import (DantzigOptions, RegressionProblem, basis_pursuit,
                         dantzig_selector, default_lambda, gauss_dantzig, lasso_cd)
from .linalg import column_standardize
from .rng import GENERATOR_NAME, parallel_map, trial_rng

__all__ = ["SyntheticSpec", "generate_synthetic", "ideal_risk", "RiskReport",
           "run_risk_sweep", "BiasReport", "compare_bias", "METHODS", "data_digest"]

METHODS = ("DS", "GaussDantzig", "Lasso", "BasisPursuit")
NOISELESS_SIGMA = 1e-12
_METHOD_ALIASES = {
    "ds": "DS", "dantzig": "DS", "gd": "GaussDantzig", "gauss_dantzig": "GaussDantzig",
    "gaussdantzig": "GaussDantzig", "lasso": "Lasso", "bp": "BasisPursuit",
    "basis_pursuit": "BasisPursuit", "basispursuit": "BasisPursuit",
}


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for ``y = X beta + sigma * noise`` with a random S-sparse ``beta``.

    ``amplitude`` is in units of ``sigma``; an explicit ``amplitudes`` tuple
    (absolute magnitudes, length ``S``) overrides it.
    """

    n: int = 72
    p: int = 256
    S: int = 8
    sigma: float = 1.0
    amplitude: float = 5.0
    amplitudes: tuple = None
    design: str = "gaussian"          # "gaussian" or "equicorrelated"
    rho: float = 0.0
    signs: str = "positive"           # "positive" or "random"

    def __post_init__(self):
        if self.n < 1 or self.p < 1 or not 0 <= self.S <= min(self.n, self.p):
            raise ConfigError("need 0 <= S <= min(n, p)")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ConfigError("sigma must be positive and finite")
        if self.design not in ("gaussian", "equicorrelated"):
            raise ConfigError(f"unknown design {self.design!r}")
        if not 0 <= self.rho < 1:
            raise ConfigError("rho must lie in [0, 1)")
        if self.signs not in ("positive", "random"):
            raise ConfigError(f"unknown sign pattern {self.signs!r}")
        if self.amplitudes is not None:
            amps = tuple(float(a) for a in self.amplitudes)
            if len(amps) != self.S or not all(math.isfinite(a) for a in amps):
                raise ConfigError("amplitudes must be S finite values")
            object.__setattr__(self, "amplitudes", amps)
        elif not math.isfinite(self.amplitude):
            raise ConfigError("amplitude must be finite")


def generate_synthetic(spec, seed, rep=0):
    """Draw one problem instance; returns ``(RegressionProblem, beta_true)``.

    The design is column-standardized before the response is formed.
    """
    rng = trial_rng(seed, rep)
    n, p = spec.n, spec.p
    Z = rng.standard_normal((n, p))
    if spec.design == "equicorrelated" and spec.rho > 0:
        common = rng.standard_normal((n, 1))
        Z = math.sqrt(1.0 - spec.rho) * Z + math.sqrt(spec.rho) * common
    X = column_standardize(Z)
    beta = np.zeros(p)
    if spec.S:
        support = rng.choice(p, spec.S, replace=False)
        mags = (np.array(spec.amplitudes) if spec.amplitudes is not None
                else np.full(spec.S, spec.amplitude * spec.sigma))
        signs = rng.choice([-1.0, 1.0], spec.S) if spec.signs == "random" else np.ones(spec.S)
        beta[support] = signs * mags
    y = X @ beta + spec.sigma * rng.standard_normal(n)
    return RegressionProblem(X, y, spec.sigma, standardize=False), beta


def data_digest(prob, beta):
    h = hashlib.sha256()
    for a in (prob.X, prob.y, beta):
        h.update(np.ascontiguousarray(a, dtype=float).tobytes())
    return h.hexdigest()


def ideal_risk(beta, sigma):
    """Oracle risk ``sum_j min(beta_j^2, sigma^2)``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    b = np.asarray(beta, dtype=float)
    return float(np.sum(np.minimum(b * b, sigma * sigma)))


def _canonical_method(name):
    key = str(name).replace("-", "_").lower()
    if name in METHODS:
        return name
    if key not in _METHOD_ALIASES:
        raise ConfigError(f"unknown method {name!r}; choose from {', '.join(METHODS)}")
    return _METHOD_ALIASES[key]


@dataclass
class RiskReport:
    rows: list
    spec: SyntheticSpec
    reps: int
    seed: int
    lambda_grid: list
    methods: list
    rep_digests: list = field(default_factory=list)
    zero_estimate_risk: float = None
    notes: dict = field(default_factory=dict)

    def row(self, method, lambda_factor):
        for r in self.rows:
            if r["method"] == method and math.isclose(r["lambda_factor"], lambda_factor,
                                                      rel_tol=1e-12, abs_tol=0.0):
                return r
        raise KeyError((method, lambda_factor))

    def to_dict(self):
        return {"spec": asdict(self.spec), "reps": self.reps, "seed": self.seed,
                "lambda_grid": self.lambda_grid, "methods": self.methods,
                "generator": GENERATOR_NAME, "zero_estimate_risk": self.zero_estimate_risk,
                "rep_digests": self.rep_digests, "notes": self.notes, "rows": self.rows}


def _lambda_grid(grid, n, p):
    if not grid:
        raise ConfigError("lambda grid must be non-empty")
    values = [float(g) for g in grid]
    if any(not (v > 0 and math.isfinite(v)) for v in values):
        raise ConfigError("lambda factors must be positive and finite")
    canon = {}
    for tag, v in (("sqrt_2logp", default_lambda(p)), ("sqrt_2logn", default_lambda(n))):
        match = [g for g in values if math.isclose(g, v, rel_tol=1e-12)]
        if not match:
            values.append(v)
            match = [v]
        prev = canon.get(match[0])
        canon[match[0]] = f"{prev},{tag}" if prev else tag
    return values, canon


def _fit(method, prob, factor, lasso_passes, ds_cache):
    if method in ("DS", "GaussDantzig"):
        opts = DantzigOptions.custom(factor)
        if factor not in ds_cache:
            ds_cache[factor] = dantzig_selector(prob, opts)
        if method == "DS":
            return ds_cache[factor].beta, False
        return gauss_dantzig(prob, opts, first_stage=ds_cache[factor]).beta, False
    if method == "Lasso":
        try:
            return lasso_cd(prob, factor * prob.sigma, max_pass=lasso_passes, tol=1e-9).beta, False
        except IterationLimit as exc:
            return exc.result.beta, True
    return basis_pursuit(prob.X, prob.y).beta, False


def run_risk_sweep(spec, lambda_grid, methods=("DS",), reps=20, seed=0, threads=1,
                   lasso_passes=2000):
    """Empirical squared-error risk per (method, lambda factor).

    ``lambda_grid`` holds factors multiplying ``sigma``; ``sqrt(2 log p)`` and
    ``sqrt(2 log n)`` are appended when missing and flagged in the
    ``canonical`` column. For each method the cell with the smallest risk is
    flagged ``empirical_argmin``.
    """
    methods = [_canonical_method(m) for m in methods]
    if not methods:
        raise ConfigError("at least one method is required")
    if "BasisPursuit" in methods and spec.sigma > NOISELESS_SIGMA:
        raise ConfigError("BasisPursuit is only valid for noiseless specs (sigma <= 1e-12)")
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    grid, canon = _lambda_grid(lambda_grid, spec.n, spec.p)

    def one_rep(r):
        prob, beta = generate_synthetic(spec, seed, r)
        err = np.empty((len(methods), len(grid)))
        stalled = 0
        ds_cache = {}
        # BasisPursuit ignores lambda: solve once per rep
        bp_err = None
        for i, m in enumerate(methods):
            for k, g in enumerate(grid):
                if m == "BasisPursuit" and bp_err is not None:
                    err[i, k] = bp_err
                    continue
                b, flag = _fit(m, prob, g, lasso_passes, ds_cache)
                stalled += flag
                err[i, k] = float(np.sum((b - beta) ** 2))
                if m == "BasisPursuit":
                    bp_err = err[i, k]
        return (err, ideal_risk(beta, spec.sigma), float(beta @ beta),
                data_digest(prob, beta), stalled)

    out = parallel_map(one_rep, range(reps), threads)
    errs = np.stack([o[0] for o in out])
    ideal = float(np.mean([o[1] for o in out]))
    zero_risk = float(np.mean([o[2] for o in out]))
    risk = errs.mean(axis=0)
    se = errs.std(axis=0, ddof=1) / math.sqrt(reps) if reps > 1 else np.zeros_like(risk)
    rows = []
    for i, m in enumerate(methods):
        best = int(np.argmin(risk[i]))
        for k, g in enumerate(grid):
            rows.append({
                "method": m, "lambda_factor": g, "lambda": g * spec.sigma,
                "canonical": canon.get(g, ""), "risk": float(risk[i, k]),
                "risk_se": float(se[i, k]), "ideal_risk": ideal,
                "ratio": float(risk[i, k] / ideal) if ideal > 0 else None,
                "empirical_argmin": k == best, "reps": reps, "seed": seed,
            })
    return RiskReport(rows=rows, spec=spec, reps=reps, seed=seed, lambda_grid=grid,
                      methods=methods, rep_digests=[o[3] for o in out],
                      zero_estimate_risk=zero_risk,
                      notes={"lasso_nonconverged": int(sum(o[4] for o in out))})


@dataclass
class BiasReport:
    spec: SyntheticSpec
    reps: int
    seed: int
    lambda_factor: float
    ds_errors: np.ndarray
    gd_errors: np.ndarray
    ds_signed_bias: float
    gd_signed_bias: float
    ds_raw_bias: float
    gd_raw_bias: float
    ds_risk: float
    gd_risk: float
    ideal_risk: float

    @property
    def ds_mean_error(self):
        return float(np.mean(self.ds_errors))

    @property
    def gd_mean_error(self):
        return float(np.mean(self.gd_errors))

    @property
    def mean_difference(self):
        """Mean of (Gauss-Dantzig error - DS error); negative favours Gauss-Dantzig."""
        return float(np.mean(self.gd_errors - self.ds_errors))

    @property
    def win_rate(self):
        return float(np.mean(self.gd_errors < self.ds_errors))

    @property
    def ds_risk_ratio(self):
        return self.ds_risk / self.ideal_risk if self.ideal_risk > 0 else math.inf

    def to_dict(self):
        return {
            "spec": asdict(self.spec), "reps": self.reps, "seed": self.seed,
            "lambda_factor": self.lambda_factor, "generator": GENERATOR_NAME,
            "ds_mean_error": self.ds_mean_error, "gd_mean_error": self.gd_mean_error,
            "mean_difference": self.mean_difference, "win_rate": self.win_rate,
            "ds_signed_bias": self.ds_signed_bias, "gd_signed_bias": self.gd_signed_bias,
            "ds_raw_bias": self.ds_raw_bias, "gd_raw_bias": self.gd_raw_bias,
            "ds_risk": self.ds_risk, "gd_risk": self.gd_risk, "ideal_risk": self.ideal_risk,
            "ds_risk_ratio": self.ds_risk_ratio if self.ideal_risk > 0 else None,
            "ds_errors": self.ds_errors.tolist(), "gd_errors": self.gd_errors.tolist(),
        }


def compare_bias(spec, reps=100, seed=0, threads=1):
    """Paired Dantzig vs Gauss-Dantzig errors at ``lambda = sqrt(2 log p)``.

    Errors are Euclidean norms ``||beta_hat - beta||_2``. The signed bias is
    ``sign(beta_j) * (beta_hat_j - beta_j)`` averaged over the true support,
    so shrinkage toward zero is negative whatever the sign pattern; the raw
    bias omits the sign factor.
    """
    if reps < 1:
        raise ConfigError("reps must be >= 1")
    factor = default_lambda(spec.p)
    opts = DantzigOptions.custom(factor)

    def one_rep(r):
        prob, beta = generate_synthetic(spec, seed, r)
        ds = dantzig_selector(prob, opts)
        gd = gauss_dantzig(prob, opts, first_stage=ds)
        supp = np.flatnonzero(beta)
        sgn = np.sign(beta[supp])
        out = [float(np.linalg.norm(ds.beta - beta)), float(np.linalg.norm(gd.beta - beta)),
               float(np.sum((ds.beta - beta) ** 2)), float(np.sum((gd.beta - beta) ** 2)),
               ideal_risk(beta, spec.sigma)]
        for est in (ds, gd):
            d = est.beta[supp] - beta[supp]
            out += [d * sgn, d]
        return out

    res = parallel_map(one_rep, range(reps), threads)

    def pooled(k):
        parts = [r[k] for r in res if len(r[k])]
        return float(np.mean(np.concatenate(parts))) if parts else 0.0

    return BiasReport(
        spec=spec, reps=reps, seed=seed, lambda_factor=factor,
        ds_errors=np.array([r[0] for r in res]), gd_errors=np.array([r[1] for r in res]),
        ds_signed_bias=pooled(5), ds_raw_bias=pooled(6),
        gd_signed_bias=pooled(7), gd_raw_bias=pooled(8),
        ds_risk=float(np.mean([r[2] for r in res])), gd_risk=float(np.mean([r[3] for r in res])),
        ideal_risk=float(np.mean([r[4] for r in res])))
