"""Dense primal-dual interior-point solver for linear programs.

Problems are stated as::

    minimize    c @ x
    subject to  A @ x == b
                G @ x <= h
                lower <= x <= upper

Finite variable bounds are folded into extra inequality rows, slacks are
added for all inequality rows, and the resulting problem is solved with
Mehrotra's predictor-corrector method. Each Newton step is reduced to the
normal equations ``G' D G`` (plus a Schur complement for equality rows) and
factored with a dense Cholesky decomposition.
"""
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import DimensionMismatch, NonFiniteValue, SolverBreakdown

__all__ = ["LinearProgram", "LpSolution", "LpStatus", "SolverOptions",
           "FeasibilityReport", "solve_lp", "feasibility_check"]

STEP_FRACTION = 0.99
DIVERGENCE_WINDOW = 10
PIVOT_REGULARIZATION = 1e-10


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


def _mat(a, rows, cols, name):
    if a is None:
        return np.zeros((rows, cols))
    m = np.array(a, dtype=float)
    if m.size == 0:
        return np.zeros((0, cols))
    m = np.atleast_2d(m)
    if m.shape[1] != cols:
        raise DimensionMismatch(f"{name} has {m.shape[1]} columns, expected {cols}")
    return m


def _vec(v, n, name, fill=0.0):
    if v is None:
        return np.full(n, fill, dtype=float)
    x = np.array(v, dtype=float).reshape(-1)
    if x.shape[0] != n:
        raise DimensionMismatch(f"{name} has length {x.shape[0]}, expected {n}")
    return x


@dataclass
class LinearProgram:
    """Dense LP data. Bounds default to free variables (``-inf``/``inf``)."""

    c: np.ndarray
    A: np.ndarray = None
    b: np.ndarray = None
    G: np.ndarray = None
    h: np.ndarray = None
    lower: np.ndarray = None
    upper: np.ndarray = None

    def __post_init__(self):
        self.c = np.array(self.c, dtype=float).reshape(-1)
        N = self.c.shape[0]
        if N < 1:
            raise DimensionMismatch("LP needs at least one variable")
        self.A = _mat(self.A, 0, N, "A")
        self.b = _vec(self.b, self.A.shape[0], "b")
        self.G = _mat(self.G, 0, N, "G")
        self.h = _vec(self.h, self.G.shape[0], "h")
        self.lower = _vec(self.lower, N, "lower", -np.inf)
        self.upper = _vec(self.upper, N, "upper", np.inf)
        for name in ("c", "A", "b", "G", "h"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise NonFiniteValue(f"LP coefficient array {name} is not finite")
        if np.any(np.isnan(self.lower)) or np.any(np.isnan(self.upper)):
            raise NonFiniteValue("variable bounds contain NaN")

    @property
    def n_vars(self):
        return self.c.shape[0]

    def inequality_form(self):
        """Return ``(G, h, n_user_rows, lower_idx, upper_idx)`` with bounds as rows."""
        N = self.n_vars
        lo = np.flatnonzero(np.isfinite(self.lower))
        up = np.flatnonzero(np.isfinite(self.upper))
        eye = np.eye(N)
        G = np.vstack([self.G, -eye[lo], eye[up]])
        h = np.concatenate([self.h, -self.lower[lo], self.upper[up]])
        return G, h, self.G.shape[0], lo, up


@dataclass
class SolverOptions:
    max_iterations: int = 100
    gap_tolerance: float = 1e-8
    feasibility_tolerance: float = 1e-8
    initial_point: np.ndarray = None   # None selects the least-squares start

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (self.gap_tolerance > 0 and self.feasibility_tolerance > 0):
            raise ValueError("tolerances must be positive")


@dataclass
class LpSolution:
    status: LpStatus
    x: np.ndarray
    objective_value: float
    dual_eq: np.ndarray
    dual_ineq: np.ndarray
    iterations: int
    duality_gap: float
    primal_residual: float
    dual_residual: float
    dual_objective: float
    diagnostics: dict = field(default_factory=dict)

    def summary(self):
        """Scalar diagnostics as a plain dict (for reports)."""
        return {
            "status": self.status.value,
            "iterations": self.iterations,
            "objective_value": self.objective_value,
            "dual_objective": self.dual_objective,
            "duality_gap": self.duality_gap,
            "primal_residual": self.primal_residual,
            "dual_residual": self.dual_residual,
            "start": self.diagnostics.get("start"),
        }


@dataclass
class FeasibilityReport:
    eq_violation: float
    ineq_violation: float
    bound_violation: float
    tol: float

    @property
    def max_violation(self):
        return max(self.eq_violation, self.ineq_violation, self.bound_violation)

    @property
    def feasible(self):
        return self.max_violation <= self.tol


def feasibility_check(lp, x, tol=1e-6):
    """Absolute violation of each constraint class at ``x``."""
    x = _vec(x, lp.n_vars, "x")
    eq = float(np.max(np.abs(lp.A @ x - lp.b), initial=0.0))
    ineq = float(np.max(lp.G @ x - lp.h, initial=0.0))
    bnd = float(max(np.max(lp.lower - x, initial=0.0), np.max(x - lp.upper, initial=0.0)))
    return FeasibilityReport(max(eq, 0.0), max(ineq, 0.0), max(bnd, 0.0), tol)


def _cho(M):
    """Cholesky factor, adding a small diagonal shift on near-singularity."""
    scale = max(1.0, float(np.max(np.abs(np.diag(M)), initial=0.0)))
    shift = 0.0
    for _ in range(12):
        try:
            if shift:
                return cho_factor(M + shift * np.eye(M.shape[0]), lower=True, check_finite=False)
            return cho_factor(M, lower=True, check_finite=False)
        except LinAlgError:
            shift = PIVOT_REGULARIZATION * scale if not shift else shift * 100.0
    raise LinAlgError("normal-equation matrix could not be factored")


class _NewtonSystem:
    """Factored reduced KKT system for one diagonal scaling ``d`` of G's rows."""

    def __init__(self, A, G, d):
        self.A = A
        H = (G.T * d) @ G
        self.H = H = 0.5 * (H + H.T)
        self.Hf = _cho(H)
        if A.shape[0]:
            self.HiAt = cho_solve(self.Hf, A.T, check_finite=False)
            M = A @ self.HiAt
            self.Mf = _cho(0.5 * (M + M.T))

    def solve(self, r1, r2, refine=2):
        """Solve ``H dx + A' dy = r1``, ``A dx = r2``.

        The factors may carry a small diagonal shift, so a couple of
        refinement passes against the unshifted H recover the lost accuracy
        late in the iteration when the scaling is extreme.
        """
        dx, dy = self._solve(r1, r2)
        for _ in range(refine):
            e1 = r1 - self.H @ dx - self.A.T @ dy
            e2 = r2 - self.A @ dx
            ex, ey = self._solve(e1, e2)
            dx, dy = dx + ex, dy + ey
        return dx, dy

    def _solve(self, r1, r2):
        Hr1 = cho_solve(self.Hf, r1, check_finite=False)
        if not self.A.shape[0]:
            return Hr1, np.zeros(0)
        dy = cho_solve(self.Mf, self.A @ Hr1 - r2, check_finite=False)
        return Hr1 - self.HiAt @ dy, dy


def _inf(v):
    return float(np.max(np.abs(v), initial=0.0))


def _max_step(v, dv):
    neg = dv < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-v[neg] / dv[neg]))


def _shift_positive(v):
    m = float(np.min(v))
    if m <= 0:
        v = v + (1.0 - m)
    return v


def solve_lp(lp, opts=None):
    """Solve ``lp`` with Mehrotra's predictor-corrector interior-point method.

    Parameters
    ----------
    lp : LinearProgram
    opts : SolverOptions, optional

    Returns
    -------
    LpSolution
        ``status`` is Optimal when the scaled primal and dual residuals are
        below ``feasibility_tolerance`` and the duality gap is below
        ``gap_tolerance * (1 + |objective|)``. Infeasible/Unbounded results
        carry a certificate direction in ``diagnostics["certificate"]``.

    Raises
    ------
    SolverBreakdown
        When an iterate becomes non-finite.
    """
    opts = opts or SolverOptions()
    c, A, b = lp.c, lp.A, lp.b
    G, h, m_user, lo_idx, up_idx = lp.inequality_form()
    N, m_eq, m = lp.n_vars, A.shape[0], G.shape[0]

    if m == 0:
        return _solve_equality_only(lp, opts)

    nb, nh, nc = 1.0 + _inf(b), 1.0 + _inf(h), 1.0 + _inf(c)

    # starting point
    sys0 = _NewtonSystem(A, G, np.ones(m))
    if opts.initial_point is None:
        x, _ = sys0.solve(G.T @ h, b)
        s = _shift_positive(h - G @ x)
        w, y = sys0.solve(-c, np.zeros(m_eq))
        z = _shift_positive(G @ w)
        start = "least-squares"
    else:
        x = _vec(opts.initial_point, N, "initial_point").copy()
        s = _shift_positive(h - G @ x)
        y = np.zeros(m_eq)
        z = np.ones(m)
        start = "supplied"

    status = LpStatus.ITERATION_LIMIT
    certificate = None
    history = []
    rising = 0
    last_score = np.inf
    it = 0
    while True:
        r_d = c + A.T @ y + G.T @ z
        r_p = A @ x - b
        r_i = G @ x + s - h
        pobj = float(c @ x)
        dobj = float(-b @ y - h @ z)
        gap = float(s @ z)
        pres = max(_inf(r_p) / nb if m_eq else 0.0,
                   _inf(r_i) / nh)
        dres = _inf(r_d) / nc
        history.append((pres, dres, gap))
        if not all(np.isfinite(v) for v in (pobj, dobj, gap, pres, dres)):
            raise SolverBreakdown("non-finite iterate", it)

        tol_gap = opts.gap_tolerance * (1.0 + abs(pobj))
        if (pres <= opts.feasibility_tolerance and dres <= opts.feasibility_tolerance
                and gap <= tol_gap and abs(pobj - dobj) <= tol_gap):
            status = LpStatus.OPTIMAL
            break

        # infeasibility certificates
        hz_by = float(h @ z + b @ y)
        if hz_by < 0:
            score = _inf(A.T @ y + G.T @ z) / -hz_by
            if score <= opts.feasibility_tolerance:
                status, certificate = LpStatus.INFEASIBLE, {"y": y / -hz_by, "z": z / -hz_by}
                break
        if pobj < 0:
            score = max(_inf(A @ x) if m_eq else 0.0,
                        np.max(G @ x, initial=0.0)) / -pobj
            if score <= opts.feasibility_tolerance:
                status, certificate = LpStatus.UNBOUNDED, {"x": x / -pobj}
                break

        score = max(pres, dres)
        rising = rising + 1 if score > last_score else 0
        last_score = score
        if rising >= DIVERGENCE_WINDOW:
            status, certificate = _classify_divergence(A, b, G, h, c, x, y, z)
            break
        if it >= opts.max_iterations:
            break
        it += 1

        d = z / s
        try:
            ns = _NewtonSystem(A, G, d)
        except LinAlgError as exc:
            raise SolverBreakdown("normal equations could not be factored", it) from exc

        def step(rc):
            r1 = -r_d - G.T @ (d * r_i - rc / s)
            dx, dy = ns.solve(r1, -r_p)
            ds = -r_i - G @ dx
            dz = -(rc + z * ds) / s
            return dx, dy, ds, dz

        mu = gap / m
        dx, dy, ds, dz = step(s * z)
        ap = min(1.0, _max_step(s, ds))
        ad = min(1.0, _max_step(z, dz))
        mu_aff = float((s + ap * ds) @ (z + ad * dz)) / m
        sigma = (mu_aff / mu) ** 3 if mu > 0 else 0.0
        dx, dy, ds, dz = step(s * z + ds * dz - sigma * mu)
        ap = min(1.0, STEP_FRACTION * _max_step(s, ds))
        ad = min(1.0, STEP_FRACTION * _max_step(z, dz))
        x = x + ap * dx
        s = s + ap * ds
        y = y + ad * dy
        z = z + ad * dz
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z)) and np.all(np.isfinite(y))):
            raise SolverBreakdown("non-finite iterate", it)

    diagnostics = {"start": start, "history": history}
    if certificate is not None:
        diagnostics["certificate"] = certificate
    n_lo = lo_idx.size
    diagnostics["dual_lower"] = (lo_idx, z[m_user:m_user + n_lo].copy())
    diagnostics["dual_upper"] = (up_idx, z[m_user + n_lo:].copy())
    return LpSolution(
        status=status, x=x, objective_value=pobj, dual_eq=y.copy(),
        dual_ineq=z[:m_user].copy(), iterations=it, duality_gap=pobj - dobj,
        primal_residual=pres, dual_residual=dres, dual_objective=dobj,
        diagnostics=diagnostics)


def _classify_divergence(A, b, G, h, c, x, y, z):
    # residuals grew for DIVERGENCE_WINDOW steps: pick whichever side looks unbounded
    dual_growth = float(_inf(z)) + float(_inf(y) if y.size else 0.0)
    primal_growth = float(_inf(x))
    if dual_growth >= primal_growth:
        t = max(1.0, dual_growth)
        return LpStatus.INFEASIBLE, {"y": y / t, "z": z / t}
    t = max(1.0, primal_growth)
    return LpStatus.UNBOUNDED, {"x": x / t}


def _solve_equality_only(lp, opts):
    # no inequalities or bounds: optimal iff c lies in the row space of A
    A, b, c = lp.A, lp.b, lp.c
    N = lp.n_vars
    if A.shape[0]:
        x, *_ = np.linalg.lstsq(A, b, rcond=None)
        y, *_ = np.linalg.lstsq(A.T, -c, rcond=None)
    else:
        x, y = np.zeros(N), np.zeros(0)
    pres = float(_inf(A @ x - b)) / (1.0 + _inf(b)) if A.shape[0] else 0.0
    r_d = c + A.T @ y
    dres = float(_inf(r_d)) / (1.0 + _inf(c))
    if pres > opts.feasibility_tolerance:
        status, cert = LpStatus.INFEASIBLE, {"y": A @ x - b}
    elif dres > opts.feasibility_tolerance:
        status, cert = LpStatus.UNBOUNDED, {"x": -r_d}
    else:
        status, cert = LpStatus.OPTIMAL, None
    pobj = float(c @ x)
    dobj = float(-b @ y) if A.shape[0] else 0.0
    diag = {"start": "equality-only"}
    if cert is not None:
        diag["certificate"] = cert
    return LpSolution(status, x, pobj, y, np.zeros(0), 0, pobj - dobj, pres, dres, dobj, diag)
