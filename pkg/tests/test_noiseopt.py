"""Tests for noise-vector optimization: multiplicative updates, the uniform
variant, the projected-gradient baseline, and joint hyperparameter search."""

import numpy as np
import pytest

from gplabelnoise import (
    ConfigError,
    InvalidInputError,
    JointOptConfig,
    KernelParams,
    MultUpdateConfig,
    PgdConfig,
    build_kernel_matrix,
    diagonal_solution,
    fit_matrix,
    gen_example1,
    gen_gp,
    heuristic_params,
    joint_optimize,
    mult_update_step,
    optimize_sigma,
    optimize_sigma_matrix,
    optimize_sigma_uniform,
    optimize_sigma_uniform_matrix,
    projected_gradient_baseline_matrix,
)
from gplabelnoise.rng import make_rng, normals

# configurations tight enough to chase hand-checkable fixed points to high
# precision; the defaults stop earlier, at practically useful accuracy
TIGHT_MULT = MultUpdateConfig(tol_sigma=1e-12, tol_nll=0.0)
TIGHT_PGD = PgdConfig(tol_sigma=1e-14, tol_nll=0.0, tol_grad=1e-12)

# ---------------------------------------------------------------------------
# single multiplicative step
# ---------------------------------------------------------------------------


class TestMultUpdateStep:
    """One update on one-point problems where the arithmetic is by hand."""

    def _state(self, k, sigma, y):
        return fit_matrix(np.array([[k]]), np.array([sigma]), np.array([y]))

    def test_step_from_one_doubles(self):
        # k=1, sigma=1, y=2: alpha = 2/2, diag = 1/2  ->  1 * (1^2) / (1/2) = 2
        state = self._state(1.0, 1.0, 2.0)
        new = mult_update_step(state, np.array([2.0]), MultUpdateConfig(zero_clip=0.0))
        assert new[0] == pytest.approx(2.0, rel=1e-12)

    def test_stationary_at_diagonal_solution(self):
        # sigma = y^2 - k = 3 is a fixed point
        state = self._state(1.0, 3.0, 2.0)
        new = mult_update_step(state, np.array([2.0]), MultUpdateConfig(zero_clip=0.0))
        assert new[0] == pytest.approx(3.0, rel=1e-12)

    def test_penalty_shifts_the_fixed_point(self):
        # with lambda=1/2, p=1 the denominator at sigma=1 doubles: 1 stays put
        state = self._state(1.0, 1.0, 2.0)
        config = MultUpdateConfig(penalty_lambda=0.5, penalty_p=1.0, zero_clip=0.0)
        new = mult_update_step(state, np.array([2.0]), config)
        assert new[0] == pytest.approx(1.0, rel=1e-12)


# ---------------------------------------------------------------------------
# diagonal-kernel closed form
# ---------------------------------------------------------------------------


class TestDiagonalSolution:
    """Per-label optimum when the Gram matrix is diagonal."""

    def test_hand_values(self):
        out = diagonal_solution(np.array([1.0, 4.0, 2.0]), np.array([2.0, 1.0, -2.0]))
        assert np.allclose(out, [3.0, 0.0, 2.0], atol=1e-14)

    @pytest.mark.parametrize(
        "k_diag,y",
        [
            (np.array([0.0, 1.0]), np.ones(2)),   # zero variance entry
            (np.array([-1.0, 1.0]), np.ones(2)),  # negative variance entry
            (np.ones(3), np.ones(2)),             # length mismatch
        ],
    )
    def test_invalid_inputs_rejected(self, k_diag, y):
        with pytest.raises(InvalidInputError):
            diagonal_solution(k_diag, y)


# ---------------------------------------------------------------------------
# multiplicative optimizer
# ---------------------------------------------------------------------------


class TestOptimizeSigma:
    """Fixed points, traces, and the absorbing zero of the multiplicative map."""

    def test_scalar_problem_reaches_exact_optimum(self):
        sigma, trace = optimize_sigma_matrix(
            np.array([[1.0]]), np.array([2.0]), TIGHT_MULT
        )
        assert abs(sigma[0] - 3.0) < 1e-8, f"sigma={sigma[0]!r}"
        assert trace.converged
        assert trace.monotone

    def test_scalar_problem_default_config_is_close(self):
        sigma, trace = optimize_sigma_matrix(np.array([[1.0]]), np.array([2.0]))
        assert abs(sigma[0] - 3.0) < 1e-4
        assert trace.converged

    def test_trace_bookkeeping(self):
        _, trace = optimize_sigma_matrix(np.array([[1.0]]), np.array([2.0]), TIGHT_MULT)
        assert trace.func_evals == trace.iters + 1
        # the per-iteration counter is cumulative: one evaluation per step
        assert trace.func_evals_per_iter[0] == 1
        assert trace.func_evals == trace.func_evals_per_iter[-1]
        assert np.all(np.diff(trace.func_evals_per_iter) >= 1)
        assert trace.sigma_change_per_iter[0] == 0.0
        assert trace.final_nll == trace.nll_per_iter[-1]
        assert len(trace.nll_per_iter) == trace.iters + 1

    def test_zero_is_absorbing_when_signal_explains_labels(self):
        # k=4, y=1: y^2 < k, so the noise estimate must shrink to nothing
        K, y = np.array([[4.0]]), np.array([1.0])
        config = MultUpdateConfig(zero_clip=0.0)
        sigma = 0.1
        for _ in range(12):
            state = fit_matrix(K, np.array([sigma]), y)
            new = float(mult_update_step(state, y, config)[0])
            assert new < sigma, f"{new} !< {sigma}"
            sigma = new
        full = MultUpdateConfig(
            max_iters=1000, tol_sigma=0.0, tol_nll=0.0, zero_clip=0.0,
            sigma_init=np.array([0.1]),
        )
        final, _ = optimize_sigma_matrix(K, y, full)
        assert final[0] == 0.0

    def test_scalar_contraction_factor(self):
        # on k=1, y=2 the gap 1/sigma - 1/3 shrinks by exactly k/y^2 per step
        K, y = np.array([[1.0]]), np.array([2.0])
        config = MultUpdateConfig(zero_clip=0.0)
        sigma = 0.5
        for _ in range(5):
            state = fit_matrix(K, np.array([sigma]), y)
            new = float(mult_update_step(state, y, config)[0])
            ratio = (1.0 / new - 1.0 / 3.0) / (1.0 / sigma - 1.0 / 3.0)
            assert ratio == pytest.approx(0.25, abs=1e-12)
            sigma = new

    def test_far_apart_inputs_recover_diagonal_solution(self):
        X = np.array([[0.0], [1e6], [2e6], [3e6], [4e6]])
        K = build_kernel_matrix(KernelParams(1.0, 1.0), X)
        assert np.array_equal(K, np.eye(5))
        y = np.array([2.0, 0.5, -3.0, 0.8, -0.2])
        sigma, trace = optimize_sigma_matrix(K, y)
        star = diagonal_solution(np.diag(K), y)
        assert np.max(np.abs(sigma - star)) < 1e-6
        assert trace.monotone

    def test_dataset_and_matrix_front_ends_agree_bitwise(self):
        data = gen_example1(0)
        params = heuristic_params(data.X, data.y_centered)
        s1, t1 = optimize_sigma(params, data)
        K = build_kernel_matrix(params, data.X)
        s2, t2 = optimize_sigma_matrix(K, data.y_centered)
        assert np.array_equal(s1, s2)
        assert t1.final_nll == t2.final_nll

    def test_synthetic_fixture_trace(self):
        data = gen_example1(0)
        params = heuristic_params(data.X, data.y_centered)
        _, trace = optimize_sigma(params, data)
        assert trace.converged
        assert trace.monotone
        assert trace.final_nll == pytest.approx(10.206420193778502, abs=1e-6)
        assert trace.func_evals == trace.iters + 1

    def test_penalty_shrinks_the_noise_vector(self):
        data = gen_example1(0)
        params = heuristic_params(data.X, data.y_centered)
        plain, _ = optimize_sigma(params, data)
        penalized, _ = optimize_sigma(
            params, data, MultUpdateConfig(penalty_lambda=0.5, penalty_p=1.0)
        )
        assert np.sum(penalized) < 0.7 * np.sum(plain)

    def test_initial_point_at_fixed_point_stays(self):
        config = MultUpdateConfig(
            tol_sigma=1e-12, tol_nll=0.0, sigma_init=np.array([3.0])
        )
        sigma, trace = optimize_sigma_matrix(np.array([[1.0]]), np.array([2.0]), config)
        assert abs(sigma[0] - 3.0) < 1e-12
        assert trace.iters <= 2

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(max_iters=0),
            dict(tol_sigma=-1.0),
            dict(tol_nll=-1.0),
            dict(penalty_lambda=-0.1),
            dict(penalty_p=0.5),
            dict(zero_clip=-1.0),
            dict(sigma_init=np.array([0.0])),
            dict(sigma_init=np.array([-1.0])),
        ],
    )
    def test_bad_configuration_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            MultUpdateConfig(**kwargs)


# ---------------------------------------------------------------------------
# uniform (single shared noise level) variant
# ---------------------------------------------------------------------------


class TestOptimizeSigmaUniform:
    """Shared-scalar dynamics built from the same update."""

    def test_single_point_matches_per_label_optimum(self):
        sigma, _ = optimize_sigma_uniform_matrix(
            np.array([[1.0]]), np.array([2.0]), TIGHT_MULT
        )
        assert abs(sigma - 3.0) < 1e-6

    def test_converged_value_is_a_fixed_point(self):
        X = np.linspace(0.0, 1.0, 6).reshape(-1, 1)
        K = build_kernel_matrix(KernelParams(1.0, 0.5), X)
        y = normals(make_rng(3), 6)
        sigma, trace = optimize_sigma_uniform_matrix(K, y, TIGHT_MULT)
        assert trace.converged
        state = fit_matrix(K, np.full(6, sigma), y)
        ratio = float(state.alpha @ state.alpha) / float(np.sum(state.kinv_diag))
        assert abs(sigma * ratio - sigma) < 1e-6

    def test_zero_labels_drive_sigma_to_zero(self):
        X = np.linspace(0.0, 1.0, 4).reshape(-1, 1)
        K = build_kernel_matrix(KernelParams(1.0, 0.5), X)
        config = MultUpdateConfig(sigma_init=0.5, zero_clip=0.0)
        sigma, trace = optimize_sigma_uniform_matrix(K, np.zeros(4), config)
        assert sigma == 0.0
        assert trace.monotone

    def test_penalty_not_supported(self):
        config = MultUpdateConfig(penalty_lambda=0.5)
        with pytest.raises(ConfigError):
            optimize_sigma_uniform_matrix(np.eye(2), np.ones(2), config)

    def test_vector_initialization_rejected(self):
        config = MultUpdateConfig(sigma_init=np.array([1.0, 2.0]))
        with pytest.raises(ConfigError):
            optimize_sigma_uniform_matrix(np.eye(2), np.ones(2), config)

    def test_dataset_and_matrix_front_ends_agree(self):
        data = gen_example1(1)
        params = heuristic_params(data.X, data.y_centered)
        s1, _ = optimize_sigma_uniform(params, data)
        K = build_kernel_matrix(params, data.X)
        s2, _ = optimize_sigma_uniform_matrix(K, data.y_centered)
        assert s1 == s2


# ---------------------------------------------------------------------------
# projected-gradient baseline
# ---------------------------------------------------------------------------


class TestProjectedGradientBaseline:
    """Line-searched gradient descent with clipping to the nonnegative orthant."""

    def test_scalar_problem_reaches_optimum_slowly(self):
        sigma, trace = projected_gradient_baseline_matrix(
            np.array([[1.0]]), np.array([2.0]), TIGHT_PGD
        )
        assert abs(sigma[0] - 3.0) < 1e-6
        _, mult_trace = optimize_sigma_matrix(
            np.array([[1.0]]), np.array([2.0]), TIGHT_MULT
        )
        assert trace.iters > mult_trace.iters

    def test_zero_iterations_when_started_at_optimum(self):
        K = np.diag([1.0, 1.0])
        y = np.array([2.0, 3.0])
        star = diagonal_solution(np.diag(K), y)
        config = PgdConfig(sigma_init=star)
        sigma, trace = projected_gradient_baseline_matrix(K, y, config)
        assert trace.iters == 0
        assert trace.converged
        assert np.array_equal(sigma, star)

    def test_far_apart_inputs_recover_diagonal_solution(self):
        X = np.array([[0.0], [1e6], [2e6], [3e6], [4e6]])
        K = build_kernel_matrix(KernelParams(1.0, 1.0), X)
        y = np.array([2.0, 0.5, -3.0, 0.8, -0.2])
        sigma, trace = projected_gradient_baseline_matrix(K, y)
        star = diagonal_solution(np.diag(K), y)
        assert trace.converged
        assert np.max(np.abs(sigma - star)) < 1e-3

    def test_agrees_with_multiplicative_on_smooth_instance(self):
        rng = make_rng(300)
        n = 8 + int(rng.random() * 7)
        params = KernelParams(1.0, 0.25)
        clean = gen_gp(params, n, d=2, seed=400)
        y = clean.y + normals(rng, n, std=2.0)
        K = build_kernel_matrix(params, clean.X)
        _, mult_trace = optimize_sigma_matrix(K, y)
        _, pgd_trace = projected_gradient_baseline_matrix(
            K, y, PgdConfig(max_iters=20000)
        )
        assert abs(mult_trace.final_nll - pgd_trace.final_nll) < 1e-4
        assert mult_trace.func_evals < pgd_trace.func_evals

    def test_never_beats_multiplicative_on_synthetic_fixture(self):
        data = gen_example1(0)
        params = heuristic_params(data.X, data.y_centered)
        K = build_kernel_matrix(params, data.X)
        _, mult_trace = optimize_sigma_matrix(K, data.y_centered)
        _, pgd_trace = projected_gradient_baseline_matrix(K, data.y_centered)
        assert mult_trace.final_nll <= pgd_trace.final_nll + 1e-9

    @pytest.mark.parametrize(
        "kwargs",
        [dict(max_iters=0), dict(step_size=0.0), dict(tol_grad=-1.0)],
    )
    def test_bad_configuration_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            PgdConfig(**kwargs)


# ---------------------------------------------------------------------------
# joint hyperparameter and noise optimization
# ---------------------------------------------------------------------------


class TestJointOptimize:
    """Alternating hyperparameter line search and noise updates."""

    def test_zero_outer_rounds_keeps_heuristic_hyperparameters(self):
        data = gen_example1(0)
        heuristic = heuristic_params(data.X, data.y_centered)
        params, sigma, _ = joint_optimize(
            data, JointOptConfig(outer_rounds=0, restarts=1)
        )
        assert params.signal_variance == heuristic.signal_variance
        assert params.length_scale == heuristic.length_scale
        sigma_only, _ = optimize_sigma(heuristic, data)
        assert np.allclose(sigma, sigma_only, rtol=0.0, atol=1e-12)

    def test_improves_on_fixed_hyperparameters(self):
        data = gen_example1(0)
        heuristic = heuristic_params(data.X, data.y_centered)
        _, sigma_trace = optimize_sigma(heuristic, data)
        _, _, joint_trace = joint_optimize(data)
        assert joint_trace.final_nll <= sigma_trace.final_nll + 1e-9

    def test_small_instance_returns_finite_solution(self):
        data = gen_gp(KernelParams(1.0, 0.5), 16, d=1, seed=1, base_noise_std=0.2)
        params, sigma, trace = joint_optimize(
            data, JointOptConfig(outer_rounds=2, restarts=2)
        )
        assert np.isfinite(params.signal_variance) and params.signal_variance > 0.0
        assert np.isfinite(params.length_scale) and params.length_scale > 0.0
        assert np.all(sigma >= 0.0)
        assert np.isfinite(trace.final_nll)

    def test_deterministic_across_calls(self):
        data = gen_gp(KernelParams(1.0, 0.5), 12, d=1, seed=4, base_noise_std=0.2)
        config = JointOptConfig(outer_rounds=2, restarts=3)
        p1, s1, t1 = joint_optimize(data, config)
        p2, s2, t2 = joint_optimize(data, config)
        assert p1.signal_variance == p2.signal_variance
        assert p1.length_scale == p2.length_scale
        assert np.array_equal(s1, s2)
        assert t1.final_nll == t2.final_nll

    def test_recovers_generating_hyperparameters_in_log_space(self):
        true = KernelParams(1.0, 0.5)
        dev_sv, dev_ell, sigma_peaks = [], [], []
        for seed in range(20):
            data = gen_gp(true, 48, d=2, seed=seed)
            params, sigma, _ = joint_optimize(data)
            dev_sv.append(abs(np.log(params.signal_variance) - np.log(1.0)))
            dev_ell.append(abs(np.log(params.length_scale) - np.log(0.5)))
            sigma_peaks.append(float(np.max(sigma)))
        assert float(np.median(dev_sv)) < 0.5, f"median |dlog sv| {np.median(dev_sv)}"
        assert float(np.median(dev_ell)) < 0.5, f"median |dlog ell| {np.median(dev_ell)}"
        # noiseless draws should not be explained away as label noise
        assert float(np.median(sigma_peaks)) < 0.1

    @pytest.mark.parametrize(
        "kwargs",
        [dict(outer_rounds=-1), dict(restarts=0), dict(theta_lr=0.0)],
    )
    def test_bad_configuration_rejected(self, kwargs):
        with pytest.raises(ConfigError):
            JointOptConfig(**kwargs)
