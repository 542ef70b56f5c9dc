"""Tests for paid_features.oracle."""

import math

import numpy as np
import pytest
from paid_features.core.errors import InstanceMismatchError, SingularCovarianceError
from paid_features.environment import (
    RoundSampler,
    builtin_instance,
    builtin_names,
    episode_rng,
    make_lower_bound_known,
    make_lower_bound_unknown,
)
from paid_features.models import ConstantProfile, Instance
from paid_features.oracle import (
    check_max_loss_bound,
    cost_regret,
    expected_loss,
    expected_loss_batch,
    instance_checks,
    lipschitz_excess,
    loss_landscape,
    max_loss_bound,
    observed_covariance,
    optimal_loss_at,
    optimal_predictor,
    optimal_predictors,
    uniform_ball,
)


@pytest.fixture
def correlated_noise_2d() -> Instance:
    """Instance whose unconstrained optimal predictor leaves the S-ball."""
    return Instance(
        name="correlated-2d",
        d=2,
        theta_star=[1.0, 0.0],
        x_mean=[0.0, 0.0],
        x_cov_centered=[[1.0, 0.0], [0.0, 0.01]],
        profile=ConstantProfile(matrix=[[1.0, 0.99], [0.99, 1.0]]),
        lambda_=1.0,
        S=1.0,
    )


class TestExpectedLoss:
    """Tests for expected_loss."""

    def test_one_dimensional_substitution(self, unit_instance):
        """Test 2/4 - 1 + 1 + 0.3 = 0.8."""
        assert expected_loss(unit_instance, 0.3, [0.5]) == pytest.approx(0.8)

    def test_perfect_prediction_pays_only_cost(self, zero_noise_2d):
        """Test l(c, theta*) = lambda c without feature noise."""
        assert expected_loss(zero_noise_2d, 0.4, zero_noise_2d.theta) == pytest.approx(0.4)

    def test_output_noise_shifts_loss(self, unit_instance):
        """Test that output noise adds a constant."""
        noisy = unit_instance.model_copy(update={"output_noise_var": 0.25})
        assert expected_loss(noisy, 0.3, [0.5]) == pytest.approx(1.05)

    def test_batch_matches_scalar(self, sensor_3d, rng):
        """Test that batched evaluation equals the scalar form."""
        costs = rng.random(5)
        nus = uniform_ball(rng, 5, 3, sensor_3d.S)
        batch = expected_loss_batch(sensor_3d, costs, nus)
        for c, nu, value in zip(costs, nus, batch):
            assert value == pytest.approx(expected_loss(sensor_3d, float(c), nu), rel=1e-12)

    def test_wrong_length_predictor(self, unit_instance):
        """Test that a predictor of the wrong dimension raises."""
        with pytest.raises(ValueError):
            expected_loss(unit_instance, 0.3, [0.5, 0.5])

    def test_matches_monte_carlo(self, sensor_3d):
        """Test the closed form against simulated squared errors within 5 standard errors."""
        nu = np.array([0.5, -0.3, 0.2])
        c = 0.25
        batch = RoundSampler(sensor_3d).sample_many(np.full(200_000, c), episode_rng(11))
        errors = (batch.x_hat @ nu - batch.y) ** 2 + sensor_3d.lam * c
        stderr = errors.std(ddof=1) / math.sqrt(errors.size)
        assert abs(errors.mean() - expected_loss(sensor_3d, c, nu)) <= 5 * stderr


class TestOptimalPredictor:
    """Tests for optimal_predictor and optimal_loss_at."""

    def test_one_dimensional_half(self, unit_instance):
        """Test nu* = 1/2 when feature and noise variances are both 1."""
        assert np.allclose(optimal_predictor(unit_instance, 0.3), [0.5])

    def test_noiseless_predictor_is_theta(self, zero_noise_2d):
        """Test nu* = theta* when Sigma_n(c) = 0."""
        assert np.allclose(optimal_predictor(zero_noise_2d, 0.5), zero_noise_2d.theta, atol=1e-8)

    def test_one_dimensional_never_projects(self):
        """Test |nu_bar(c)| <= S for 1-D instances with |theta*| <= S."""
        for inst in (*make_lower_bound_known(0.3), builtin_instance("fratio")):
            result = optimal_predictors(inst, np.linspace(0.0, 1.0, 51))
            assert result.interior.all()

    def test_one_dimensional_closed_form(self):
        """Test l*(c) = s_x s_n(c) / (s_x + s_n(c)) + lambda c."""
        inst = builtin_instance("fratio")
        for c in (0.0, 0.3, 0.8):
            noise = (1 - c) / (1 + c)
            assert optimal_loss_at(inst, c) == pytest.approx(noise / (1 + noise) + inst.lam * c)

    def test_flat_baseline(self, fratio_base):
        """Test l*(c) = 1/2 on the flat baseline."""
        for c in (0.0, 0.25, 0.5, 0.75, 1.0):
            assert abs(optimal_loss_at(fratio_base, c) - 0.5) <= 1e-12

    def test_step_instances(self):
        """Test l*_-(0) = 1/3, l*_+(0) = 0.6 and l*_+(1/2) = 1/2 at eps = 1/2."""
        minus, plus = make_lower_bound_known(0.5)
        assert optimal_loss_at(minus, 0.0) == pytest.approx(1.0 / 3.0)
        assert optimal_loss_at(plus, 0.0) == pytest.approx(0.6)
        assert optimal_loss_at(plus, 0.5) == pytest.approx(0.5)

    def test_first_order_condition(self, sensor_3d):
        """Test Sigma_xhat(c) nu = Sigma_x theta* for interior optima."""
        result = optimal_predictors(sensor_3d, np.linspace(0.0, 1.0, 21))
        cross = sensor_3d.sigma_x @ sensor_3d.theta
        for c, nu, inside in zip(result.costs, result.predictors, result.interior):
            if inside:
                residual = observed_covariance(sensor_3d, float(c)) @ nu - cross
                assert np.linalg.norm(residual) <= 1e-8

    def test_loss_matches_predictor(self, sensor_3d):
        """Test l*(c) = l(c, nu*(c))."""
        for c in (0.0, 0.4, 0.9):
            nu = optimal_predictor(sensor_3d, c)
            assert optimal_loss_at(sensor_3d, c) == pytest.approx(expected_loss(sensor_3d, c, nu))

    def test_no_feasible_predictor_does_better(self, sensor_3d, rng):
        """Test l(c, nu) >= l*(c) - 1e-9 at 1000 random feasible predictors."""
        for c in (0.1, 0.5, 1.0):
            nus = uniform_ball(rng, 1000, 3, sensor_3d.S)
            losses = expected_loss_batch(sensor_3d, np.full(1000, c), nus)
            assert losses.min() >= optimal_loss_at(sensor_3d, c) - 1e-9

    def test_projection_branch(self, correlated_noise_2d, rng):
        """Test the ball-constrained optimum when nu_bar(c) leaves the ball."""
        result = optimal_predictors(correlated_noise_2d, [0.5])
        assert not result.interior[0]
        nu = result.predictors[0]
        assert np.linalg.norm(nu) <= 1.0 + 1e-8
        nus = uniform_ball(rng, 2000, 2, 1.0)
        losses = expected_loss_batch(correlated_noise_2d, np.full(2000, 0.5), nus)
        assert result.losses[0] <= losses.min() + 1e-9
        assert result.losses[0] == pytest.approx(expected_loss(correlated_noise_2d, 0.5, nu))

    def test_singular_covariance(self):
        """Test that a singular Sigma_xhat(c) raises."""
        inst = Instance.model_validate(
            {
                "name": "degenerate",
                "d": 1,
                "theta_star": [1.0],
                "x_mean": [0.0],
                "x_cov_centered": [[0.0]],
                "profile": {"kind": "constant", "matrix": [[0.0]]},
                "lambda": 1.0,
                "S": 1.0,
                "R": 1.0,
            },
            context={"check_contract": False},
        )
        with pytest.raises(SingularCovarianceError):
            optimal_predictor(inst, 0.5)


class TestLossLandscape:
    """Tests for loss_landscape."""

    def test_step_minus_optimum_at_zero(self):
        """Test c* = 0 and l* = 1/3 for the low-variance step instance."""
        minus, _ = make_lower_bound_known(0.5)
        landscape = loss_landscape(minus, 1000)
        assert landscape.optimal_cost == 0.0
        assert abs(landscape.optimal_loss - 1.0 / 3.0) <= minus.lam / 1000

    def test_step_plus_optimum_at_half(self):
        """Test c* = 1/2 for the high-variance step instance."""
        _, plus = make_lower_bound_known(0.3)
        landscape = loss_landscape(plus, 1000)
        assert landscape.optimal_cost == pytest.approx(0.5)

    def test_zero_noise_optimum(self, zero_noise_2d):
        """Test that paying is pure loss without feature noise."""
        landscape = loss_landscape(zero_noise_2d, 100)
        assert landscape.optimal_cost == 0.0
        assert landscape.optimal_loss == pytest.approx(0.0, abs=1e-12)

    def test_grid_layout(self, unit_instance):
        """Test M + 1 grid costs and the lambda / M slack."""
        landscape = loss_landscape(unit_instance, 10)
        assert len(landscape.costs) == 11
        assert landscape.costs[0] == 0.0 and landscape.costs[-1] == 1.0
        assert landscape.slack == pytest.approx(0.1)
        assert landscape.lower_bound == pytest.approx(landscape.optimal_loss - 0.1)

    def test_grid_too_small(self, unit_instance):
        """Test that M < 2 raises."""
        with pytest.raises(ValueError):
            loss_landscape(unit_instance, 1)

    @pytest.mark.parametrize("K", [2, 4, 8])
    def test_perturbed_optimum_inside_interval(self, K):
        """Test that every perturbed instance's optimum lies in its modified interval."""
        _, perturbed = make_lower_bound_unknown(K)
        for inst in perturbed:
            landscape = loss_landscape(inst, 10_000)
            left, right = inst.profile.interval
            assert left <= landscape.optimal_cost < right
            assert landscape.optimal_loss <= 0.5 - 1.0 / (16 * K) + inst.lam / 10_000

    @pytest.mark.parametrize("name", builtin_names())
    def test_one_sided_lipschitz(self, name):
        """Test l*(c2) <= l*(c1) + lambda (c2 - c1) + 1e-9 for all grid pairs."""
        inst = builtin_instance(name)
        landscape = loss_landscape(inst, 511)
        assert lipschitz_excess(landscape, inst.lam) <= 1e-9

    def test_one_sided_lipschitz_on_piecewise_profile(self, sensor_3d):
        """Test the Lipschitz property with output noise and a nonzero mean."""
        landscape = loss_landscape(sensor_3d, 511)
        benefit = np.asarray(landscape.losses) - sensor_3d.lam * np.asarray(landscape.costs)
        assert np.all(np.diff(benefit) <= 1e-9)

    def test_lipschitz_excess_detects_jump(self, unit_instance):
        """Test that a loss jumping up faster than lambda is detected."""
        landscape = loss_landscape(unit_instance, 4)
        broken = landscape.model_copy(update={"losses": [0.0, 0.0, 5.0, 5.0, 5.0]})
        assert lipschitz_excess(broken, 1.0) == pytest.approx(5.0 - 0.25)


class TestCostRegret:
    """Tests for cost_regret."""

    def test_flat_landscape_has_no_payment_regret(self, fratio_base):
        """Test that every cost is optimal on the flat baseline."""
        landscape = loss_landscape(fratio_base, 100)
        assert cost_regret(fratio_base, [0.0, 0.3, 1.0, 1.0], landscape) == pytest.approx(0.0, abs=1e-9)

    def test_counts_repeated_costs(self, unit_instance):
        """Test that repeated costs are counted once each."""
        landscape = loss_landscape(unit_instance, 10)
        gap = optimal_loss_at(unit_instance, 1.0) - landscape.optimal_loss
        assert cost_regret(unit_instance, [1.0, 1.0, 1.0], landscape) == pytest.approx(3 * gap)

    def test_mismatched_landscape(self, unit_instance, fratio_base):
        """Test that a landscape of another instance raises."""
        landscape = loss_landscape(fratio_base, 10)
        with pytest.raises(InstanceMismatchError):
            cost_regret(unit_instance, [0.5], landscape)


class TestMaxLossBound:
    """Tests for the max-loss bound."""

    def test_bound_value(self, unit_instance):
        """Test 6 S^2 (R^2 d + S^2) + lambda = 13 for d = S = R = lambda = 1."""
        assert max_loss_bound(unit_instance) == pytest.approx(13.0)

    @pytest.mark.parametrize("name", builtin_names())
    def test_holds_for_builtins(self, name):
        """Test the bound on 1000 random feasible pairs."""
        assert check_max_loss_bound(builtin_instance(name), samples=1000)

    def test_uniform_ball_is_feasible(self, rng):
        """Test that sampled predictors stay inside the ball."""
        points = uniform_ball(rng, 500, 3, 2.0)
        assert points.shape == (500, 3)
        assert np.all(np.linalg.norm(points, axis=1) <= 2.0 + 1e-12)


class TestInstanceChecks:
    """Tests for instance_checks."""

    def test_fratio_passes(self):
        """Test that the shipped ratio instance passes every check."""
        results = instance_checks(builtin_instance("fratio-2d"))
        assert all(r.passed for r in results), [r for r in results if not r.passed]

    def test_norm_violation_named(self):
        """Test that ||theta*|| > S fails the named check."""
        inst = Instance.model_validate(
            {
                "name": "too-long",
                "d": 1,
                "theta_star": [2.0],
                "x_mean": [0.0],
                "x_cov_centered": [[1.0]],
                "profile": {"kind": "constant", "matrix": [[0.5]]},
                "lambda": 1.0,
                "S": 1.0,
            },
            context={"check_contract": False},
        )
        failed = [r.name for r in instance_checks(inst) if not r.passed]
        assert failed == ["theta_norm"]

    def test_perturbed_instance_includes_kl_checks(self, perturbed_p2):
        """Test that the perturbed instance passes the divergence checks."""
        results = {r.name: r for r in instance_checks(perturbed_p2)}
        for name in ("kl_interval_bound", "kl_zero_outside", "perturbed_optimum_depth"):
            assert results[name].passed
        assert all(r.passed for r in results.values())
