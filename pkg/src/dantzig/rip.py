"""Restricted isometry constants and canonical correlations between predictor groups.

The S-restricted isometry constant of a column-normalized design ``X`` is::

    delta_S = max over |T| = S of  max(lambda_max(X_T' X_T) - 1, 1 - lambda_min(X_T' X_T))

Exact evaluation enumerates all ``C(p, S)`` subsets and is refused beyond a
budget; the sampled variant returns a lower bound from random subsets.
"""
import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import policy as _policy
from .errors import BudgetExceeded, ConfigError, DegenerateGroup, DimensionMismatch
from .linalg import as_matrix, column_norms, jacobi_eigenvalues
from .rng import trial_rng

__all__ = ["RipMode", "RipReport", "GroupCorrReport", "restricted_isometry_exact",
           "restricted_isometry_sampled", "subset_delta", "first_canonical_correlation",
           "max_canonical_correlation_sampled"]

DEFAULT_BUDGET = 10 ** 6
_CHUNK = 4096
_UNIT_TOL = 1e-8


class RipMode(str, Enum):
    EXACT = "Exact"
    SAMPLED = "Sampled"


@dataclass
class RipReport:
    S: int
    delta: float
    worst_subset: tuple
    mode: RipMode
    subsets_checked: int
    seed: int = None
    lambda_min: float = None
    lambda_max: float = None

    def to_dict(self):
        return {"S": self.S, "delta": self.delta, "worst_subset": list(self.worst_subset),
                "mode": self.mode.value, "subsets_checked": self.subsets_checked,
                "seed": self.seed, "lambda_min": self.lambda_min, "lambda_max": self.lambda_max}


@dataclass
class GroupCorrReport:
    group_a: tuple
    group_b: tuple
    rho: float
    mode: str
    trials: int
    seed: int = None
    history: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {"group_a": list(self.group_a), "group_b": list(self.group_b),
                "rho": self.rho, "mode": self.mode, "trials": self.trials, "seed": self.seed}


def _check_design(X, S):
    X = as_matrix(X, "X")
    n, p = X.shape
    if not 1 <= S <= min(n, p):
        raise ConfigError(f"S must satisfy 1 <= S <= min(n, p) = {min(n, p)}")
    if np.max(np.abs(column_norms(X) - 1.0)) > _UNIT_TOL:
        raise ConfigError("restricted isometry constants need unit-norm columns")
    return X


def _batch_deltas(X, subsets, gram=None):
    """Extreme eigenvalues and deltas for a (B, S) integer array of subsets."""
    if gram is not None:
        blocks = gram[subsets[:, :, None], subsets[:, None, :]]
    else:
        cols = X[:, subsets]                       # (n, B, S)
        blocks = np.einsum("nbi,nbj->bij", cols, cols)
    w = jacobi_eigenvalues(blocks)
    lo, hi = w[:, 0], w[:, -1]
    return np.maximum(hi - 1.0, 1.0 - lo), lo, hi


def subset_delta(X, subset):
    """Isometry defect ``max(lambda_max - 1, 1 - lambda_min)`` of one column subset."""
    X = as_matrix(X, "X")
    idx = np.asarray([subset], dtype=int)
    d, lo, hi = _batch_deltas(X, idx)
    return float(d[0])


class _Running:
    def __init__(self):
        self.delta = -np.inf
        self.subset = None
        self.lo = self.hi = None

    def update(self, subsets, deltas, lo, hi):
        k = int(np.argmax(deltas))
        if deltas[k] > self.delta:
            self.delta = float(deltas[k])
            self.subset = tuple(int(i) for i in subsets[k])
            self.lo, self.hi = float(lo[k]), float(hi[k])


def restricted_isometry_exact(X, S, budget=DEFAULT_BUDGET):
    """Exact ``delta_S`` by enumerating every size-``S`` column subset.

    Raises
    ------
    BudgetExceeded
        If ``C(p, S) > budget``; the exception carries the subset count.
    """
    X = _check_design(X, S)
    p = X.shape[1]
    total = math.comb(p, S)
    if total > budget:
        raise BudgetExceeded(total, budget)
    gram = X.T @ X
    best = _Running()
    combos = itertools.combinations(range(p), S)
    while True:
        chunk = np.array(list(itertools.islice(combos, _CHUNK)), dtype=int)
        if chunk.size == 0:
            break
        best.update(chunk, *_batch_deltas(X, chunk, gram))
    return RipReport(S=S, delta=max(best.delta, 0.0), worst_subset=best.subset,
                     mode=RipMode.EXACT, subsets_checked=total,
                     lambda_min=best.lo, lambda_max=best.hi)


def restricted_isometry_sampled(X, S, trials, seed):
    """Lower bound on ``delta_S`` from ``trials`` uniformly drawn subsets.

    Trial ``t`` draws its subset from a generator derived from ``(seed, t)``,
    so a longer run extends a shorter one and the bound never decreases with
    ``trials``. When ``trials >= C(p, S)`` the space is enumerated instead.
    """
    X = _check_design(X, S)
    p = X.shape[1]
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if trials >= math.comb(p, S):
        rep = restricted_isometry_exact(X, S, budget=trials)
        rep.seed = seed
        return rep
    subsets = np.array([np.sort(trial_rng(seed, t).choice(p, S, replace=False))
                        for t in range(trials)], dtype=int)
    best = _Running()
    gram = X.T @ X if p <= 2000 else None
    for start in range(0, trials, _CHUNK):
        chunk = subsets[start:start + _CHUNK]
        best.update(chunk, *_batch_deltas(X, chunk, gram))
    return RipReport(S=S, delta=max(best.delta, 0.0), worst_subset=best.subset,
                     mode=RipMode.SAMPLED, subsets_checked=trials, seed=seed,
                     lambda_min=best.lo, lambda_max=best.hi)


def _whitener(block, name):
    scale = float(np.max(np.diag(block)))
    tol = _policy.POLICY.whitening_tol
    if scale <= 0:
        raise DegenerateGroup(f"{name} has zero within-group variance")
    try:
        L = np.linalg.cholesky(block)
    except np.linalg.LinAlgError as exc:
        raise DegenerateGroup(f"{name} covariance is singular") from exc
    if np.min(np.diag(L)) ** 2 < tol * scale:
        raise DegenerateGroup(f"{name} covariance is singular within tolerance")
    return L


def first_canonical_correlation(X, group_a, group_b):
    """Largest canonical correlation between two disjoint column groups.

    Columns are centered, each group's covariance is whitened by its Cholesky
    factor, and the result is the top singular value of the whitened
    cross-covariance.
    """
    X = as_matrix(X, "X")
    a = np.asarray(group_a, dtype=int).reshape(-1)
    b = np.asarray(group_b, dtype=int).reshape(-1)
    if a.size == 0 or b.size == 0:
        raise ConfigError("groups must be non-empty")
    if set(a.tolist()) & set(b.tolist()):
        raise ConfigError("groups must be disjoint")
    if a.size + b.size > X.shape[0]:
        raise DimensionMismatch("combined group size exceeds the number of rows")
    Xa = X[:, a] - X[:, a].mean(axis=0)
    Xb = X[:, b] - X[:, b].mean(axis=0)
    La = _whitener(Xa.T @ Xa, "group_a")
    Lb = _whitener(Xb.T @ Xb, "group_b")
    cross = Xa.T @ Xb
    W = np.linalg.solve(La, cross)
    W = np.linalg.solve(Lb, W.T).T
    rho = float(np.linalg.svd(W, compute_uv=False)[0])
    return min(max(rho, 0.0), 1.0)


def max_canonical_correlation_sampled(X, size_a, size_b, trials, seed):
    """Maximum first canonical correlation over random disjoint group pairs.

    Each trial draws ``size_a + size_b`` distinct columns from its own
    generator seeded by ``(seed, trial)``; the first ``size_a`` form group A.
    """
    X = as_matrix(X, "X")
    n, p = X.shape
    if size_a < 1 or size_b < 1 or size_a + size_b > min(n, p):
        raise ConfigError("need 1 <= sizes and size_a + size_b <= min(n, p)")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    best, best_pair, history = -1.0, None, []
    for t in range(trials):
        cols = trial_rng(seed, t).choice(p, size_a + size_b, replace=False)
        a, b = cols[:size_a], cols[size_a:]
        rho = first_canonical_correlation(X, a, b)
        if rho > best:
            best, best_pair = rho, (tuple(int(i) for i in a), tuple(int(i) for i in b))
        history.append(best)
    return GroupCorrReport(group_a=best_pair[0], group_b=best_pair[1], rho=best,
                           mode="SampledMax" if trials > 1 else "Single",
                           trials=trials, seed=seed, history=history)
