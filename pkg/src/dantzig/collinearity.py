"""Maximum absolute sample correlation among independent Gaussian predictors.

Each replication draws an ``n x p`` standard Gaussian design and records the
largest ``|corr(X_j, X_k)|`` over all ``j < k``. Even though the columns are
independent, this maximum grows quickly with ``p`` at fixed ``n``.
"""
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import policy as _policy
from .errors import ConfigError, DegenerateSample
from .linalg import as_matrix
from .rng import GENERATOR_NAME, parallel_map, trial_rng

__all__ = ["SimConfig", "MaxCorrDistribution", "simulate_max_abs_correlation",
           "max_pairwise_abs_correlation", "histogram", "rank_shift_test"]

_BLOCK = 1024


@dataclass(frozen=True)
class SimConfig:
    n: int
    p: int
    reps: int
    seed: int
    bins: int = 50

    def __post_init__(self):
        if self.n < 3 or self.p < 2 or self.reps < 1 or self.bins < 1:
            raise ConfigError("need n >= 3, p >= 2, reps >= 1, bins >= 1")
        if self.seed is None or self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")


@dataclass
class MaxCorrDistribution:
    samples: np.ndarray
    summary: dict
    bin_edges: np.ndarray
    counts: np.ndarray
    config: SimConfig
    skipped_pairs: int = 0
    argmax_pairs: list = field(default_factory=list, repr=False)
    generator: str = GENERATOR_NAME

    def to_dict(self):
        return {"config": asdict(self.config), "generator": self.generator,
                "summary": self.summary, "skipped_pairs": self.skipped_pairs,
                "samples": self.samples.tolist(),
                "histogram": {"edges": self.bin_edges.tolist(), "counts": self.counts.tolist()}}


def _standardized_columns(X, skip_degenerate):
    Z = X - X.mean(axis=0)
    ss = np.sum(Z * Z, axis=0)
    bad = ss / (X.shape[0] - 1) <= _policy.POLICY.variance_tol
    if np.any(bad) and not skip_degenerate:
        j = int(np.flatnonzero(bad)[0])
        raise DegenerateSample(f"column {j} is constant", column=j)
    keep = np.flatnonzero(~bad)
    return Z[:, keep] / np.sqrt(ss[keep]), keep, int(np.count_nonzero(bad))


def _max_offdiag(Z):
    p = Z.shape[1]
    best, pair = -1.0, (0, 1)
    for start in range(0, p - 1, _BLOCK):
        stop = min(start + _BLOCK, p)
        C = np.abs(Z[:, start:stop].T @ Z[:, start:])
        # drop the diagonal and everything below it
        C[np.tril_indices(stop - start, 0, C.shape[1])] = -1.0
        k = int(np.argmax(C))
        i, j = divmod(k, C.shape[1])
        if C[i, j] > best:
            best, pair = float(C[i, j]), (start + i, start + j)
    return min(best, 1.0), pair


def max_pairwise_abs_correlation(X, return_pair=False):
    """Largest ``|corr|`` between two distinct columns of ``X``.

    Computed from the Gram matrix of centered, unit-norm columns, in column
    blocks to bound memory.
    """
    X = as_matrix(X, "X")
    if X.shape[0] < 3 or X.shape[1] < 2:
        raise ConfigError("need at least 3 rows and 2 columns")
    Z, keep, _ = _standardized_columns(X, skip_degenerate=False)
    value, pair = _max_offdiag(Z)
    return (value, pair) if return_pair else value


def histogram(samples, bins):
    """Equal-width histogram over ``[min, max]``.

    Bins are left-closed with the last bin also closed on the right. If all
    samples share one value ``v`` the range is ``[v - 0.5, v + 0.5]``.
    """
    x = np.asarray(samples, dtype=float)
    if x.size == 0 or bins < 1:
        raise ValueError("histogram needs samples and bins >= 1")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(x, bins=bins, range=(lo, hi))
    return edges, counts


def _one_rep(config, rep):
    X = trial_rng(config.seed, rep).standard_normal((config.n, config.p))
    Z, keep, n_bad = _standardized_columns(X, skip_degenerate=True)
    skipped = n_bad * (config.p - n_bad) + n_bad * (n_bad - 1) // 2
    if Z.shape[1] < 2:
        return 0.0, (0, 0), skipped
    value, (i, j) = _max_offdiag(Z)
    return value, (int(keep[i]), int(keep[j])), skipped


def replicate_design(config, rep):
    """The design matrix drawn for replication ``rep`` (for cross-checks)."""
    return trial_rng(config.seed, rep).standard_normal((config.n, config.p))


def simulate_max_abs_correlation(config, threads=1):
    """Monte Carlo distribution of the maximum absolute pairwise correlation."""
    results = parallel_map(lambda r: _one_rep(config, r), range(config.reps), threads)
    samples = np.array([r[0] for r in results])
    edges, counts = histogram(samples, config.bins)
    summary = {"min": float(samples.min()), "median": float(np.median(samples)),
               "mean": float(samples.mean()), "max": float(samples.max())}
    return MaxCorrDistribution(samples=samples, summary=summary, bin_edges=edges,
                               counts=counts, config=config,
                               skipped_pairs=sum(r[2] for r in results),
                               argmax_pairs=[r[1] for r in results])


def rank_shift_test(smaller, larger):
    """One-sided Mann-Whitney test that ``larger`` is stochastically greater.

    Returns ``(statistic, p_value)``.
    """
    res = stats.mannwhitneyu(np.asarray(larger), np.asarray(smaller), alternative="greater")
    return float(res.statistic), float(res.pvalue)
