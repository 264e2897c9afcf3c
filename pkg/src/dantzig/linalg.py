"""Dense linear algebra primitives.

Matrices and vectors are plain ``numpy.ndarray`` objects of dtype float64.
The ``as_matrix``/``as_vector`` constructors enforce the shape and finiteness
invariants; every public routine here runs its inputs through them.
"""
import numpy as np
from scipy.linalg import solve_triangular

from . import policy as _policy
from .errors import (AsymmetricMatrix, DegenerateSample, DimensionMismatch,
                     NonFiniteValue, RankDeficient, SingularMatrix, ZeroColumn)

__all__ = [
    "as_matrix", "as_vector", "matmul", "cholesky_solve", "qr_least_squares",
    "pseudo_inverse_ls", "jacobi_eigenvalues", "symmetric_eigen_extremes",
    "column_standardize", "pearson_correlation",
]


def as_matrix(a, name="matrix"):
    """Validate ``a`` as a finite 2-D float array with at least one row and column."""
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"{name} must have at least one row and column")
    if not np.all(np.isfinite(m)):
        raise NonFiniteValue(f"{name} contains NaN or Inf")
    return m


def as_vector(v, name="vector"):
    x = np.array(v, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim != 1:
        raise DimensionMismatch(f"{name} must be 1-D, got ndim={x.ndim}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteValue(f"{name} contains NaN or Inf")
    return x


def matmul(A, B):
    """Matrix product with a dimension check; 1-D ``B`` is treated as a column."""
    A = as_matrix(A, "A")
    vec = np.ndim(B) == 1
    B = as_vector(B, "B")[:, None] if vec else as_matrix(B, "B")
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(
            f"cannot multiply {A.shape[0]}x{A.shape[1]} by {B.shape[0]}x{B.shape[1]}")
    C = A @ B
    return C[:, 0] if vec else C


def _check_square(A, name="A"):
    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {A.shape}")


def _check_symmetric(A):
    tol = _policy.POLICY.symmetry_tol
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A - A.T)) > tol * scale:
        raise AsymmetricMatrix("matrix is not symmetric within tolerance")


def cholesky_factor(A):
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Raises
    ------
    SingularMatrix
        If a pivot is non-positive or below ``pivot_tol * max(diag(A))``.
    """
    A = as_matrix(A, "A")
    _check_square(A)
    _check_symmetric(A)
    dmax = float(np.max(np.diag(A)))
    if dmax <= 0:
        raise SingularMatrix("matrix has no positive diagonal entry")
    try:
        L = np.linalg.cholesky(A)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix("matrix is not positive definite") from exc
    if np.min(np.diag(L)) ** 2 <= _policy.POLICY.pivot_tol * dmax:
        raise SingularMatrix("Cholesky pivot below tolerance")
    return L


def cholesky_solve(A, b):
    """Solve ``A x = b`` for symmetric positive-definite ``A``."""
    L = cholesky_factor(A)
    b = as_vector(b, "b")
    if b.shape[0] != L.shape[0]:
        raise DimensionMismatch("right-hand side length does not match matrix")
    z = solve_triangular(L, b, lower=True)
    return solve_triangular(L.T, z, lower=False)


def qr_least_squares(X, y):
    """Least-squares solution of ``X beta ~ y`` via Householder QR.

    Requires ``X`` to be tall with full column rank. A diagonal entry of R
    below ``rank_tol * max|R_ii|`` raises :class:`RankDeficient`; callers that
    can tolerate rank loss should use :func:`pseudo_inverse_ls` instead.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    n, p = X.shape
    if y.shape[0] != n:
        raise DimensionMismatch("y length does not match rows of X")
    if n < p:
        raise RankDeficient(f"{n}x{p} system has more columns than rows")
    Q, R = np.linalg.qr(X, mode="reduced")
    d = np.abs(np.diag(R))
    if d.max() == 0 or d.min() < _policy.POLICY.rank_tol * d.max():
        raise RankDeficient("design matrix is rank deficient")
    return solve_triangular(R, Q.T @ y, lower=False)


def pseudo_inverse_ls(X, y):
    """Minimum-norm least-squares solution, i.e. ``pinv(X) @ y``.

    Defined for any shape, including ``p > n``.
    """
    X = as_matrix(X, "X")
    y = as_vector(y, "y")
    if y.shape[0] != X.shape[0]:
        raise DimensionMismatch("y length does not match rows of X")
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return beta


def jacobi_eigenvalues(A, max_sweeps=50):
    """Eigenvalues of symmetric matrices by the cyclic Jacobi method.

    ``A`` may be a single ``(k, k)`` matrix or a stack ``(..., k, k)``; the
    rotations are applied to the whole stack at once. Returns eigenvalues in
    ascending order along the last axis.
    """
    A = np.array(A, dtype=float, copy=True)
    k = A.shape[-1]
    if k == 1:
        return A[..., 0, :].copy()
    eps = np.finfo(float).eps
    offmask = ~np.eye(k, dtype=bool)
    for _ in range(max_sweeps):
        sq = A * A
        off = np.sum(sq[..., offmask], axis=-1)
        if np.all(off <= (eps ** 2) * np.sum(sq, axis=(-2, -1))):
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = A[..., p, q]
                active = np.abs(apq) > 0
                if not np.any(active):
                    continue
                safe = np.where(active, apq, 1.0)
                with np.errstate(over="ignore"):
                    theta = (A[..., q, q] - A[..., p, p]) / (2.0 * safe)
                    t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(theta == 0, 1.0, t)
                t = np.where(active, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cc, ss = c[..., None], s[..., None]
                colp = A[..., :, p].copy()
                colq = A[..., :, q].copy()
                A[..., :, p] = cc * colp - ss * colq
                A[..., :, q] = ss * colp + cc * colq
                rowp = A[..., p, :].copy()
                rowq = A[..., q, :].copy()
                A[..., p, :] = cc * rowp - ss * rowq
                A[..., q, :] = ss * rowp + cc * rowq
                A[..., p, q] = 0.0
                A[..., q, p] = 0.0
    return np.sort(np.diagonal(A, axis1=-2, axis2=-1), axis=-1)


def symmetric_eigen_extremes(A):
    """Smallest and largest eigenvalue of a small symmetric matrix.

    Intended for S x S Gram blocks; the dimension is capped by the numeric
    policy (``eigen_dim_cap``).
    """
    A = as_matrix(A, "A")
    _check_square(A)
    if A.shape[0] > _policy.POLICY.eigen_dim_cap:
        raise DimensionMismatch(
            f"dimension {A.shape[0]} exceeds eigen cap {_policy.POLICY.eigen_dim_cap}")
    _check_symmetric(A)
    w = jacobi_eigenvalues(0.5 * (A + A.T))
    return float(w[0]), float(w[-1])


def column_norms(X):
    return np.sqrt(np.sum(X * X, axis=0))


def column_standardize(X):
    """Scale every column of ``X`` to unit Euclidean norm."""
    X = as_matrix(X, "X")
    norms = column_norms(X)
    bad = np.flatnonzero(norms <= _policy.POLICY.zero_norm_tol)
    if bad.size:
        raise ZeroColumn(int(bad[0]))
    return X / norms


def pearson_correlation(x, y):
    """Sample correlation coefficient of two equal-length vectors."""
    x = as_vector(x, "x")
    y = as_vector(y, "y")
    if x.shape != y.shape or x.shape[0] < 2:
        raise DimensionMismatch("need two vectors of equal length >= 2")
    xc = x - x.mean()
    yc = y - y.mean()
    n = x.shape[0]
    tol = _policy.POLICY.variance_tol
    if xc @ xc / (n - 1) <= tol:
        raise DegenerateSample("first argument is constant", column=0)
    if yc @ yc / (n - 1) <= tol:
        raise DegenerateSample("second argument is constant", column=1)
    r = (xc @ yc) / np.sqrt((xc @ xc) * (yc @ yc))
    return float(np.clip(r, -1.0, 1.0))
