"""Central numeric tolerances.

Every tolerance used by the linear algebra layer reads from the module-level
``POLICY`` object, so tests can tighten or loosen them in one place via
:func:`numeric_policy`.
"""
from contextlib import contextmanager
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class NumericPolicy:
    pivot_tol: float = 1e-12       # Cholesky pivot, relative to max diagonal
    rank_tol: float = 1e-10        # QR R-diagonal, relative to max |R_ii|
    residual_tol: float = 1e-8
    symmetry_tol: float = 1e-10
    zero_norm_tol: float = 1e-12   # column norms
    variance_tol: float = 1e-14    # sample variance for correlations
    whitening_tol: float = 1e-10   # Cholesky pivot in canonical correlation
    eigen_dim_cap: int = 64


POLICY = NumericPolicy()


@contextmanager
def numeric_policy(**overrides):
    """Temporarily override fields of the global policy."""
    global POLICY
    saved = POLICY
    POLICY = replace(saved, **overrides)
    try:
        yield POLICY
    finally:
        POLICY = saved


def get_policy():
    return POLICY
