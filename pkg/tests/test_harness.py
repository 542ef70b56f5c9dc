"""Tests for paid_features.harness."""

import importlib
import logging

import numpy as np
import pytest
from paid_features.core.errors import EpisodeError, InstanceMismatchError, ProfileError, RateFitError
from paid_features.environment import RoundSampler
from paid_features.models import PolicyOverrides, RunLog
from paid_features.oracle import loss_landscape, optimal_predictor
from paid_features.policies import PolicyDecision, PolicyRegistry, make_policy_config
from paid_features.harness import (
    concat_logs,
    expected_regret,
    fit_rate,
    in_target,
    modal_late_cost,
    run_episode,
    run_lower_bound,
    sweep,
)

GRID = 200


class FixedPolicy:
    """Plays one cost with one predictor every round."""

    def __init__(self, cost, arm, predictor):
        self.decision = PolicyDecision(cost=cost, arm=arm, predictor=np.asarray(predictor, dtype=float))

    def decide(self, t):
        return self.decision

    def observe(self, decision, sample):
        pass


def short_log(instance, T=40, seed=0, K=4, variant="unknown"):
    config = make_policy_config(variant, instance, max(T, 1), PolicyOverrides(K=K))
    return run_episode(instance, config, T, seed, landscape=loss_landscape(instance, GRID))


class TestRunEpisode:
    """Tests for run_episode."""

    def test_zero_horizon(self, fratio_2d):
        """Test that T = 0 gives an empty log with zero regret."""
        config = make_policy_config("unknown", fratio_2d, 1)
        log = run_episode(fratio_2d, config, 0, 0, landscape=loss_landscape(fratio_2d, GRID))
        assert log.rounds == []
        assert log.summary.regret == 0.0
        assert log.summary.completed

    def test_negative_horizon(self, fratio_2d):
        """Test that a negative horizon raises."""
        with pytest.raises(ValueError):
            run_episode(fratio_2d, make_policy_config("unknown", fratio_2d, 1), -1, 0)

    def test_same_seed_same_log(self, sensor_3d):
        """Test bitwise-identical logs for identical seeds."""
        a = short_log(sensor_3d, seed=11)
        b = short_log(sensor_3d, seed=11)
        assert a.model_dump() == b.model_dump()

    def test_different_seeds_differ(self, sensor_3d):
        """Test that different seeds give different realized losses."""
        a = short_log(sensor_3d, seed=1)
        b = short_log(sensor_3d, seed=2)
        assert [r.loss_realized for r in a.rounds] != [r.loss_realized for r in b.rounds]

    def test_unknown_policy_initializes_with_zero_predictor(self, fratio_2d):
        """Test that the first K rounds play each arm with nu = 0."""
        log = short_log(fratio_2d, T=20, K=4)
        assert [r.k for r in log.rounds[:4]] == [1, 2, 3, 4]
        assert all(r.nu == [0.0, 0.0] for r in log.rounds[:4])
        assert len(log.rounds) == 20
        assert [r.t for r in log.rounds] == list(range(1, 21))

    def test_predictors_stay_in_ball(self, sensor_3d):
        """Test ||nu_t|| <= S on every round."""
        log = short_log(sensor_3d, T=60, variant="known")
        for record in log.rounds:
            assert np.linalg.norm(record.nu) <= sensor_3d.S + 1e-8

    def test_oracle_policy_regret(self, unit_instance):
        """Test that playing nu*(1/K) at cost 1/K costs exactly lambda/K per round."""
        K, T = 4, 50
        nu = optimal_predictor(unit_instance, 1.0 / K)
        PolicyRegistry.register(
            "known", lambda config, instance: FixedPolicy(1.0 / K, 1, nu), override=True
        )
        config = make_policy_config("known", unit_instance, T, PolicyOverrides(K=K))
        log = run_episode(unit_instance, config, T, 0, landscape=loss_landscape(unit_instance, GRID))
        assert log.summary.regret == pytest.approx(T * unit_instance.lam / K, rel=1e-9)
        assert log.summary.prediction_regret == pytest.approx(0.0, abs=1e-9)

    def test_full_price_zero_predictor(self, fratio_base):
        """Test that nu = 0 at c = 1 on the flat baseline loses 1 per round."""
        PolicyRegistry.register(
            "unknown", lambda config, instance: FixedPolicy(1.0, config.K, [0.0]), override=True
        )
        T = 30
        config = make_policy_config("unknown", fratio_base, T, PolicyOverrides(K=4))
        log = run_episode(fratio_base, config, T, 0, landscape=loss_landscape(fratio_base, GRID))
        assert log.summary.regret == pytest.approx(T * 1.0, rel=1e-9)
        assert log.rounds[-1].regret_cum == pytest.approx(log.summary.regret)

    def test_realized_and_expected_losses_agree(self, sensor_3d):
        """Test loss_realized = squared_error + lambda c and its mean against the expected loss."""
        log = short_log(sensor_3d, T=400, variant="known")
        for record in log.rounds:
            assert record.loss_realized == pytest.approx(
                record.squared_error + sensor_3d.lam * record.cost
            )
        realized = np.array([r.loss_realized for r in log.rounds])
        expected = np.array([r.loss_expected for r in log.rounds])
        gap = realized - expected
        assert abs(gap.mean()) <= 5 * gap.std(ddof=1) / np.sqrt(gap.size)
        assert log.summary.mean_loss_realized == pytest.approx(realized.mean())
        assert log.summary.mean_loss_expected == pytest.approx(expected.mean())

    def test_zero_noise_regret_per_round_decreases(self, zero_noise_2d):
        """Test that the known-covariance learner's per-round regret shrinks on noiseless features."""
        log = short_log(zero_noise_2d, T=600, K=8, variant="known")
        cumulative = np.array([r.regret_cum for r in log.rounds])
        per_round = np.diff(cumulative, prepend=0.0)
        windows = [per_round[:100].mean(), per_round[250:350].mean(), per_round[500:].mean()]
        assert windows[0] > windows[1] > windows[2]

    def test_regret_decomposition(self, sensor_3d):
        """Test regret = payment regret + prediction regret with both parts nonnegative."""
        summary = short_log(sensor_3d, T=60).summary
        assert summary.regret == pytest.approx(summary.payment_regret + summary.prediction_regret)
        assert summary.payment_regret >= -1e-9
        assert summary.prediction_regret >= -1e-9

    def test_diagnostics_recorded(self, fratio_2d):
        """Test that per-arm objectives appear only when diagnostics are requested."""
        landscape = loss_landscape(fratio_2d, GRID)
        plain = make_policy_config("known", fratio_2d, 20, PolicyOverrides(K=3))
        traced = make_policy_config(
            "known", fratio_2d, 20, PolicyOverrides(K=3), record_diagnostics=True
        )
        assert all(r.objectives is None for r in run_episode(fratio_2d, plain, 20, 0, landscape).rounds)
        traced_log = run_episode(fratio_2d, traced, 20, 0, landscape)
        assert all(len(r.objectives) == 3 for r in traced_log.rounds)

    def test_landscape_of_other_instance(self, fratio_2d, sensor_3d):
        """Test that a landscape built for another instance is refused."""
        config = make_policy_config("unknown", fratio_2d, 10)
        with pytest.raises(ValueError, match="sensor-3d"):
            run_episode(fratio_2d, config, 10, 0, landscape=loss_landscape(sensor_3d, GRID))

    def test_failure_keeps_partial_log(self, fratio_2d, mocker):
        """Test that a sampler failure raises EpisodeError carrying the finished rounds."""
        original = RoundSampler.sample
        calls = {"n": 0}

        def flaky(self, c, rng):
            calls["n"] += 1
            if calls["n"] == 6:
                raise ProfileError("profile broke")
            return original(self, c, rng)

        mocker.patch.object(RoundSampler, "sample", flaky)
        with pytest.raises(EpisodeError) as excinfo:
            short_log(fratio_2d, T=20)
        partial = excinfo.value.partial_log
        assert isinstance(partial, RunLog)
        assert len(partial.rounds) == 5
        assert not partial.summary.completed
        assert "profile broke" in partial.summary.error


class TestScoring:
    """Tests for expected_regret and concat_logs."""

    def test_expected_regret_matches_summary(self, sensor_3d):
        """Test that rescoring a log reproduces its summary regret."""
        log = short_log(sensor_3d, T=30)
        landscape = loss_landscape(sensor_3d, GRID)
        assert expected_regret(log, landscape) == pytest.approx(log.summary.regret, rel=1e-9)

    def test_mismatched_landscape(self, sensor_3d, fratio_2d):
        """Test that scoring against another instance's landscape raises."""
        log = short_log(sensor_3d, T=5)
        with pytest.raises(InstanceMismatchError):
            expected_regret(log, loss_landscape(fratio_2d, GRID))

    def test_concat_logs(self, fratio_2d):
        """Test that concatenated segments add their regrets."""
        landscape = loss_landscape(fratio_2d, GRID)
        first = short_log(fratio_2d, T=15, seed=0)
        second = short_log(fratio_2d, T=25, seed=1)
        cumulative = concat_logs(first, second, landscape)
        assert len(cumulative) == 40
        assert cumulative[14] == pytest.approx(first.summary.regret)
        assert cumulative[-1] == pytest.approx(first.summary.regret + second.summary.regret)


class TestFitRate:
    """Tests for fit_rate."""

    def test_square_root(self):
        """Test an exact T^(1/2) curve."""
        fit = fit_rate([(T, T**0.5) for T in (100, 1000, 10_000, 100_000)])
        assert fit.slope == pytest.approx(0.5, abs=1e-9)
        assert fit.points == 4

    def test_two_thirds_with_constant(self):
        """Test an exact 7 T^(2/3) curve."""
        fit = fit_rate([(T, 7 * T ** (2 / 3)) for T in (1000, 4000, 16_000, 64_000)])
        assert fit.slope == pytest.approx(2 / 3, abs=1e-9)
        assert fit.intercept == pytest.approx(np.log(7), abs=1e-9)

    def test_noisy_points(self, rng):
        """Test a noisy square-root curve over eight horizons."""
        horizons = [2**k for k in range(10, 18)]
        points = [(T, 3 * T**0.5 * np.exp(rng.normal(0.0, 0.05))) for T in horizons]
        fit = fit_rate(points)
        assert abs(fit.slope - 0.5) < 0.05
        assert fit.stderr > 0.0

    def test_nonpositive_points_excluded(self, caplog):
        """Test that nonpositive regrets are dropped with a warning."""
        points = [(100, 10.0), (1000, -1.0), (10_000, 100.0), (100_000, 316.0), (1e6, 0.0)]
        with caplog.at_level(logging.WARNING, logger="paid_features"):
            fit = fit_rate(points)
        assert fit.points == 3
        assert fit.excluded == 2
        assert "excluded 2" in caplog.text

    def test_too_few_points(self):
        """Test that two usable points raise RateFitError."""
        with pytest.raises(RateFitError, match="≥ 3"):
            fit_rate([(100, 1.0), (1000, 2.0), (10_000, 0.0)])


class TestSweep:
    """Tests for sweep."""

    def test_mean_over_seeds(self, fratio_2d):
        """Test that the row mean is the plain average of the episodes' regrets."""
        result = sweep([fratio_2d], "unknown", [32], [0, 1, 2], workers=1, oracle_grid=GRID)
        assert len(result.episodes) == 3
        regrets = [e.regret for e in result.episodes]
        row = result.rows[0]
        assert row.n_seeds == 3
        assert row.mean == pytest.approx(sum(regrets) / 3)
        assert row.stderr == pytest.approx(np.std(regrets, ddof=1) / np.sqrt(3))

    def test_matches_single_episode(self, fratio_2d):
        """Test that a sweep episode reproduces run_episode for the same seed."""
        result = sweep([fratio_2d], "known", [24], [5], workers=1, oracle_grid=GRID)
        config = make_policy_config("known", fratio_2d, 24)
        log = run_episode(fratio_2d, config, 24, 5, landscape=loss_landscape(fratio_2d, GRID))
        assert result.episodes[0].regret == pytest.approx(log.summary.regret, rel=1e-12)

    def test_ordering(self, fratio_2d):
        """Test that episodes are ordered by horizon then seed."""
        result = sweep([fratio_2d], "unknown", [16, 8], [1, 0], workers=1, oracle_grid=GRID)
        assert [(e.horizon, e.seed) for e in result.episodes] == [(8, 0), (8, 1), (16, 0), (16, 1)]
        assert result.horizons == [8, 16]
        assert [h for h, _ in result.curve()] == [8, 16]

    @pytest.mark.parametrize(
        "horizons,seeds", [([], [0]), ([8], [])]
    )
    def test_empty_inputs(self, fratio_2d, horizons, seeds):
        """Test that empty horizon or seed lists raise."""
        with pytest.raises(ValueError):
            sweep([fratio_2d], "unknown", horizons, seeds, workers=1)

    def test_fit_needs_three_horizons(self, fratio_2d):
        """Test that fitting with two horizons raises before any episode runs."""
        with pytest.raises(RateFitError):
            sweep([fratio_2d], "unknown", [8, 16], [0], workers=1, fit=True)

    def test_fit_attached(self, fratio_2d):
        """Test that a fitted sweep carries a rate fit."""
        result = sweep([fratio_2d], "unknown", [16, 32, 64], [0, 1], workers=1, oracle_grid=GRID, fit=True)
        assert result.fit is not None
        assert result.fit.points == 3

    def test_failures_recorded(self, fratio_2d, mocker):
        """Test that a failing episode is recorded and the rest still aggregate."""
        real = run_episode

        def failing(instance, config, T, seed, landscape=None):
            if seed == 1:
                raise EpisodeError("round 3 failed", None)
            return real(instance, config, T, seed, landscape=landscape)

        sweep_module = importlib.import_module("paid_features.harness.sweep")
        mocker.patch.object(sweep_module, "run_episode", failing)
        result = sweep([fratio_2d], "unknown", [16], [0, 1, 2], workers=1, oracle_grid=GRID)
        assert len(result.failures) == 1
        assert result.failures[0].seed == 1
        assert "round 3 failed" in result.failures[0].error
        assert result.rows[0].n_seeds == 2


class TestLowerBound:
    """Tests for the lower-bound suite helpers."""

    def test_modal_late_cost(self, fratio_2d):
        """Test the modal cost over the final quarter, ties to the smallest."""
        log = short_log(fratio_2d, T=8)
        costs = [0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.75, 0.25]
        log = log.model_copy(
            update={"rounds": [r.model_copy(update={"cost": c}) for r, c in zip(log.rounds, costs)]}
        )
        assert modal_late_cost(log) == 0.25

    def test_modal_cost_of_empty_log(self, fratio_2d):
        """Test that an empty log has no modal cost."""
        with pytest.raises(ValueError):
            modal_late_cost(short_log(fratio_2d, T=0))

    def test_in_target(self):
        """Test interval and single-point targets."""
        assert in_target(0.5, 0.5, 0.625)
        assert not in_target(0.625, 0.5, 0.625)
        assert in_target(0.25, 0.25, 0.25)
        assert not in_target(0.5, 0.25, 0.25)

    def test_known_suite_shape(self):
        """Test a short known-covariance suite run."""
        report = run_lower_bound("known", 32, [0, 1], oracle_grid=GRID)
        assert [e.instance_name for e in report.entries] == ["lb-known-minus", "lb-known-plus"]
        minus, plus = report.entries
        assert minus.target_low == minus.target_high == pytest.approx(1 / 32)
        assert plus.target_low == pytest.approx(0.5)
        assert all(len(e.modal_costs) == 2 and 0 <= e.matches <= 2 for e in report.entries)

    def test_unknown_suite_shape(self):
        """Test a short optimistic suite run on two perturbed instances."""
        report = run_lower_bound("unknown", 32, [0], K_env=2, oracle_grid=GRID)
        assert len(report.entries) == 2
        for entry in report.entries:
            assert 0.5 <= entry.target_low < entry.target_high <= 1.0
            assert entry.seeds == 1

    def test_needs_seeds(self):
        """Test that an empty seed list raises."""
        with pytest.raises(ValueError):
            run_lower_bound("known", 32, [])
