import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dantzig.errors import ConfigError, DimensionMismatch, InfeasibleProblem, IterationLimit, RankDeficient
from dantzig.estimators import (
    DantzigOptions, Estimate, LambdaMode, RegressionProblem, basis_pursuit, dantzig_selector,
    default_lambda, gauss_dantzig, lasso_cd, ols_on_support, soft_threshold, support_of)
from dantzig.linalg import qr_least_squares
from oracles import dantzig_vertex_oracle


def orthonormal(rng, n):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return Q


def test_default_lambda_values():
    assert default_lambda(2) == pytest.approx(1.177410, abs=1e-6)
    assert default_lambda(1000) == pytest.approx(3.716922, abs=1e-6)
    assert default_lambda(5000) > default_lambda(1000)
    with pytest.raises(ValueError):
        default_lambda(1)


def test_lambda_modes():
    assert DantzigOptions().resolve(72, 256) == default_lambda(256)
    assert DantzigOptions(lambda_mode="sqrt_2logn").resolve(72, 256) == default_lambda(72)
    assert DantzigOptions.custom(2.5).resolve(72, 256) == 2.5
    with pytest.raises(ConfigError):
        DantzigOptions(lambda_mode=LambdaMode.CUSTOM)
    with pytest.raises(ConfigError):
        DantzigOptions(support_threshold=1.5)


def test_problem_validation():
    with pytest.raises(DimensionMismatch):
        RegressionProblem(np.ones((3, 2)), np.ones(4))
    with pytest.raises(ValueError):
        RegressionProblem(np.eye(2), np.ones(2), sigma=-1)
    prob = RegressionProblem(np.array([[3.0, 0], [4, 2]]), [1, 1])
    assert prob.standardized
    np.testing.assert_allclose(np.linalg.norm(prob.X, axis=0), 1.0)
    raw = RegressionProblem(np.array([[3.0, 0], [4, 2]]), [1, 1], standardize=False)
    assert not raw.standardized
    with pytest.raises(ConfigError):
        dantzig_selector(raw)
    dantzig_selector(raw, DantzigOptions(allow_unstandardized=True))
    with pytest.raises(ConfigError):
        dantzig_selector(RegressionProblem(np.eye(2), [1, 1], sigma=0.0))


class TestDantzig:
    def test_zero_when_correlations_small(self):
        X = np.eye(4)
        est = dantzig_selector(RegressionProblem(X, [0.1, -0.2, 0.3, 0.0]))
        assert np.all(est.beta == 0)
        assert est.support.size == 0
        assert est.lp_stats["iterations"] == 0

    @pytest.mark.parametrize("seed", range(3))
    def test_orthonormal_soft_threshold(self, seed):
        rng = np.random.default_rng(seed)
        X = orthonormal(rng, 16)
        y = X @ np.r_[np.full(4, 4.0), np.zeros(12)] + rng.standard_normal(16)
        lam = default_lambda(16)
        est = dantzig_selector(RegressionProblem(X, y, sigma=1.0))
        np.testing.assert_allclose(est.beta, soft_threshold(X.T @ y, lam), atol=1e-6)

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_vertex_oracle(self, seed):
        rng = np.random.default_rng(1000 + seed)
        n, p = 4, 6
        X = rng.standard_normal((n, p))
        X /= np.linalg.norm(X, axis=0)
        y = 2.0 * rng.standard_normal(n)
        sigma = 0.5
        prob = RegressionProblem(X, y, sigma=sigma)
        lam = default_lambda(p)
        est = dantzig_selector(prob)
        oracle, _ = dantzig_vertex_oracle(X, y, lam * sigma)
        assert est.l1_norm == pytest.approx(oracle, abs=1e-6)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), lam=st.floats(0.2, 4.0))
    def test_feasible(self, seed, lam):
        rng = np.random.default_rng(seed)
        X = rng.standard_normal((10, 15))
        y = X[:, :2] @ [3.0, -2.0] + rng.standard_normal(10)
        prob = RegressionProblem(X, y, sigma=1.0)
        est = dantzig_selector(prob, DantzigOptions.custom(lam))
        assert np.max(np.abs(prob.X.T @ est.residual)) <= lam + 1e-6

    def test_shrinkage_monotone_in_lambda(self, rng):
        X = rng.standard_normal((20, 40))
        y = X[:, :3] @ [4.0, -3.0, 2.0] + rng.standard_normal(20)
        prob = RegressionProblem(X, y)
        norms = [dantzig_selector(prob, DantzigOptions.custom(l)).l1_norm
                 for l in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0)]
        assert all(a >= b - 1e-8 for a, b in zip(norms, norms[1:]))

    def test_iteration_limit_raises(self, rng):
        from dantzig.lp import SolverOptions
        X = rng.standard_normal((20, 40))
        y = X[:, :3] @ [4.0, -3.0, 2.0]
        opts = DantzigOptions(solver=SolverOptions(max_iterations=2))
        with pytest.raises(IterationLimit):
            dantzig_selector(RegressionProblem(X, y), opts)


class TestBasisPursuit:
    def test_identity(self):
        y = np.array([1.0, -2.0, 0.5])
        np.testing.assert_allclose(basis_pursuit(np.eye(3), y).beta, y, atol=1e-7)

    def test_two_by_three(self):
        X = np.array([[1.0, 0, 1], [0, 1, 1]])
        est = basis_pursuit(X, [1.0, 1.0])
        np.testing.assert_allclose(est.beta, [0, 0, 1], atol=1e-7)
        assert est.l1_norm == pytest.approx(1.0, abs=1e-7)
        np.testing.assert_array_equal(est.support, [2])

    def test_recovery_rate(self):
        hits = 0
        for t in range(100):
            rng = np.random.default_rng(5000 + t)
            X = rng.standard_normal((40, 80))
            beta = np.zeros(80)
            idx = rng.choice(80, 3, replace=False)
            beta[idx] = rng.choice([-1.0, 1.0], 3)
            est = basis_pursuit(X, X @ beta)
            np.testing.assert_allclose(X @ est.beta, X @ beta, atol=1e-6)
            hits += np.max(np.abs(est.beta - beta)) < 1e-6
        assert hits >= 95

    def test_not_representable(self):
        X = np.array([[1.0], [1.0]])
        with pytest.raises(InfeasibleProblem) as exc:
            basis_pursuit(X, [1.0, 0.0])
        assert exc.value.residual_norm == pytest.approx(np.sqrt(0.5))


class TestOls:
    def test_full_support_inverse(self, rng):
        X = rng.standard_normal((5, 5))
        y = rng.standard_normal(5)
        np.testing.assert_allclose(ols_on_support(X, y, range(5)), np.linalg.solve(X, y))

    def test_mean(self):
        X = np.array([[1.0, 0.3], [1.0, -0.2]])
        np.testing.assert_allclose(ols_on_support(X, [1, 3], [0]), [2.0, 0.0])

    def test_restricted(self, rng):
        X = rng.standard_normal((12, 9))
        y = rng.standard_normal(12)
        S = [1, 4, 7]
        b = ols_on_support(X, y, S)
        off = np.setdiff1d(np.arange(9), S)
        assert np.all(b[off] == 0.0)
        np.testing.assert_allclose(b[S], qr_least_squares(X[:, S], y), rtol=1e-12)

    def test_empty_and_errors(self, rng):
        X = rng.standard_normal((3, 5))
        assert np.all(ols_on_support(X, np.ones(3), []) == 0)
        with pytest.raises(RankDeficient):
            ols_on_support(X, np.ones(3), range(4))
        Xd = np.column_stack([X[:, 0], X[:, 0]])
        with pytest.raises(RankDeficient):
            ols_on_support(Xd, np.ones(3), [0, 1])


class TestGaussDantzig:
    def test_zero_stage_gives_zero(self):
        est = gauss_dantzig(RegressionProblem(np.eye(4), [0.1, -0.2, 0.3, 0.0]))
        assert np.all(est.beta == 0)

    def test_recovers_true_support_refit(self):
        rng = np.random.default_rng(0)
        n, p = 50, 60
        X = rng.standard_normal((n, p))
        X /= np.linalg.norm(X, axis=0)
        S = [3, 17, 40]
        beta = np.zeros(p)
        beta[S] = [5.0, -4.0, 6.0]
        sigma = 1e-3
        y = X @ beta + sigma * rng.standard_normal(n)
        est = gauss_dantzig(RegressionProblem(X, y, sigma=sigma))
        np.testing.assert_array_equal(est.support, S)
        np.testing.assert_allclose(est.beta, ols_on_support(X, y, S), atol=1e-12)

    def test_residual_orthogonal_on_support(self, rng):
        X = rng.standard_normal((25, 50))
        y = X[:, :4] @ [3.0, -3.0, 2.0, 4.0] + rng.standard_normal(25)
        prob = RegressionProblem(X, y)
        est = gauss_dantzig(prob)
        assert est.support.size > 0
        assert np.max(np.abs(prob.X[:, est.support].T @ est.residual)) <= 1e-8

    def test_reuses_first_stage(self, rng):
        X = rng.standard_normal((25, 50))
        y = X[:, :4] @ [3.0, -3.0, 2.0, 4.0] + rng.standard_normal(25)
        prob = RegressionProblem(X, y)
        ds = dantzig_selector(prob)
        a = gauss_dantzig(prob, first_stage=ds)
        b = gauss_dantzig(prob)
        np.testing.assert_array_equal(a.beta, b.beta)
        np.testing.assert_array_equal(a.first_stage, ds.beta)

    def test_truncation_warning(self, rng):
        n, p = 3, 6
        X = rng.standard_normal((n, p))
        prob = RegressionProblem(X, rng.standard_normal(n))
        first = Estimate(beta=np.array([5.0, -4.0, 3.0, 2.0, 1.0, 0.5]),
                         support=np.arange(6), residual=np.zeros(n), method="dantzig")
        with pytest.warns(RuntimeWarning):
            est = gauss_dantzig(prob, first_stage=first)
        np.testing.assert_array_equal(est.support, [0, 1, 2])
        assert est.warnings


class TestLasso:
    def test_zero_lambda_is_ols(self, rng):
        X = rng.standard_normal((6, 6))
        y = rng.standard_normal(6)
        prob = RegressionProblem(X, y, standardize=False)
        est = lasso_cd(prob, 0.0, max_pass=20000, tol=1e-13)
        np.testing.assert_allclose(est.beta, np.linalg.solve(X, y), atol=1e-7)

    def test_orthonormal_soft_threshold(self, rng):
        X = orthonormal(rng, 10)
        y = 3 * rng.standard_normal(10)
        est = lasso_cd(RegressionProblem(X, y), 1.5)
        np.testing.assert_allclose(est.beta, soft_threshold(X.T @ y, 1.5), atol=1e-10)

    def test_kkt(self, rng):
        X = rng.standard_normal((15, 30))
        y = X[:, :3] @ [2.0, -1.0, 3.0] + 0.5 * rng.standard_normal(15)
        prob = RegressionProblem(X, y)
        lam = 0.7
        est = lasso_cd(prob, lam, max_pass=5000, tol=1e-12)
        g = prob.X.T @ est.residual
        on = est.beta != 0
        np.testing.assert_allclose(g[on], lam * np.sign(est.beta[on]), atol=1e-8)
        assert np.all(np.abs(g[~on]) <= lam + 1e-8)

    def test_iteration_limit(self, rng):
        X = rng.standard_normal((15, 30))
        prob = RegressionProblem(X, rng.standard_normal(15))
        with pytest.raises(IterationLimit) as exc:
            lasso_cd(prob, 1e-3, max_pass=1, tol=1e-14)
        assert isinstance(exc.value.result, Estimate)
        with pytest.raises(ValueError):
            lasso_cd(prob, -1.0)


def test_support_of():
    assert support_of(np.zeros(3)).size == 0
    np.testing.assert_array_equal(support_of([1, 1e-9, 0], 1e-4), [0])
    b = np.array([1.0, 0.5, 0.01, 1e-3, 1e-6])
    sizes = [support_of(b, t).size for t in (1e-7, 1e-5, 1e-3, 0.1, 0.9)]
    assert sizes == sorted(sizes, reverse=True)
    with pytest.raises(ValueError):
        support_of(b, 0.0)
