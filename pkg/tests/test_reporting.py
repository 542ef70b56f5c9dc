"""Tests for paid_features.reporting module."""

import csv
import io
import json

import pytest
from paid_features.harness import run_episode
from paid_features.models import (
    LowerBoundEntry,
    LowerBoundReport,
    RateFit,
    SweepResult,
    SweepRow,
    ViolationReport,
)
from paid_features.oracle import loss_landscape
from paid_features.policies import make_policy_config
from paid_features.reporting import ReportGenerator, generate_report


@pytest.fixture
def sample_runlog(fratio_2d):
    """A twelve-round unknown-covariance episode."""
    config = make_policy_config("unknown", fratio_2d, 12)
    return run_episode(fratio_2d, config, 12, 3, landscape=loss_landscape(fratio_2d, 100))


@pytest.fixture
def sample_sweep():
    """A two-horizon sweep with a rate fit."""
    return SweepResult(
        variant="unknown",
        horizons=[1024, 2048],
        seeds=[0, 1],
        rows=[
            SweepRow(instance_name="fratio", horizon=1024, mean=120.5, stderr=4.2, n_seeds=2),
            SweepRow(instance_name="fratio", horizon=2048, mean=190.0, stderr=6.1, n_seeds=2),
        ],
        fit=RateFit(slope=0.66, stderr=0.02, intercept=0.2, points=2),
    )


@pytest.fixture
def sample_violations():
    """A matrix concentration report."""
    return ViolationReport(
        kind="matrix",
        trials=1000,
        checkpoints=[16, 32],
        violations_per_checkpoint=[0, 1],
        any_violation_frequency=0.001,
        nominal=0.05,
        delta=0.05,
        decay_fraction=0.97,
    )


class TestReportGeneratorJSON:
    """Tests for ReportGenerator.to_json()."""

    def test_runlog_json_keeps_summary_only(self, sample_runlog):
        """Test that the run-log JSON carries config and summary but no rounds."""
        data = json.loads(ReportGenerator(sample_runlog).to_json())
        assert "rounds" not in data
        assert data["summary"]["rounds"] == 12
        assert data["config"]["variant"] == "unknown"
        assert "lambda" in data["config"]

    def test_runlog_json_keys(self, sample_runlog):
        """Test the exact key sets of the run-log JSON."""
        data = json.loads(ReportGenerator(sample_runlog).to_json())
        assert set(data) == {
            "instance_name",
            "instance_fingerprint",
            "config",
            "seed",
            "horizon",
            "summary",
        }
        assert set(data["summary"]) == {
            "rounds",
            "regret",
            "regret_per_round",
            "payment_regret",
            "prediction_regret",
            "mean_loss_realized",
            "mean_loss_expected",
            "optimal_loss",
            "slack",
            "completed",
            "error",
        }
        assert set(data["config"]) == {
            "variant",
            "T",
            "K",
            "delta",
            "lambda",
            "S",
            "R",
            "d",
            "K_overridden",
            "delta_overridden",
            "regularized",
            "regularization_scale",
            "bonus_scale",
            "include_zero_arm",
            "record_diagnostics",
        }

    def test_sweep_json_keys(self, sample_sweep):
        """Test the exact key sets of the sweep JSON, fit metadata included."""
        data = json.loads(ReportGenerator(sample_sweep).to_json())
        assert set(data) == {"variant", "horizons", "seeds", "rows", "episodes", "fit"}
        assert set(data["fit"]) == {"slope", "stderr", "intercept", "points", "excluded"}
        assert set(data["rows"][0]) == {"instance_name", "horizon", "mean", "stderr", "n_seeds"}

    def test_sweep_json_round_trips(self, sample_sweep):
        """Test that sweep JSON validates back into the model."""
        restored = SweepResult.model_validate_json(ReportGenerator(sample_sweep).to_json())
        assert restored == sample_sweep

    def test_indent(self, sample_violations):
        """Test the indent argument."""
        assert "\n    " in ReportGenerator(sample_violations).to_json(indent=4)


class TestReportGeneratorCSV:
    """Tests for ReportGenerator.to_csv()."""

    def test_runlog_columns(self, sample_runlog):
        """Test the per-round header and one row per round."""
        rows = list(csv.reader(io.StringIO(ReportGenerator(sample_runlog).to_csv())))
        assert rows[0] == ["t", "k", "cost", "loss_expected", "loss_realized", "regret_cum"]
        assert len(rows) == 13
        assert rows[1][0] == "1"
        assert float(rows[-1][5]) == pytest.approx(sample_runlog.summary.regret)

    def test_sweep_columns(self, sample_sweep):
        """Test the sweep header and rows."""
        rows = list(csv.reader(io.StringIO(ReportGenerator(sample_sweep).to_csv())))
        assert rows[0] == ["instance", "T", "mean", "stderr", "n_seeds"]
        assert rows[1] == ["fratio", "1024", "120.5", "4.2", "2"]

    def test_sweep_rows_name_their_instance(self):
        """Test that a two-instance sweep keeps one row per instance and horizon."""
        result = SweepResult(
            variant="known",
            horizons=[64],
            seeds=[0],
            rows=[
                SweepRow(instance_name="fratio", horizon=64, mean=3.0, stderr=0.0, n_seeds=1),
                SweepRow(instance_name="sensor-3d", horizon=64, mean=5.0, stderr=0.0, n_seeds=1),
            ],
        )
        rows = list(csv.reader(io.StringIO(ReportGenerator(result).to_csv())))
        assert [row[:2] for row in rows[1:]] == [["fratio", "64"], ["sensor-3d", "64"]]

    def test_landscape_columns(self, fratio_2d):
        """Test one predictor column per dimension."""
        landscape = loss_landscape(fratio_2d, 10)
        rows = list(csv.reader(io.StringIO(ReportGenerator(landscape).to_csv())))
        assert rows[0] == ["c", "loss_opt", "nu_opt_0", "nu_opt_1"]
        assert len(rows) == 12

    def test_no_tabular_form(self, sample_violations):
        """Test that a concentration report has no CSV form."""
        with pytest.raises(TypeError):
            ReportGenerator(sample_violations).to_csv()


class TestReportGeneratorMarkdown:
    """Tests for ReportGenerator.to_markdown()."""

    def test_runlog_markdown(self, sample_runlog):
        """Test the episode summary."""
        md = ReportGenerator(sample_runlog).to_markdown()
        assert md.startswith("# Episode Report")
        assert "fratio-2d" in md
        assert sample_runlog.config.describe() in md

    def test_sweep_markdown(self, sample_sweep):
        """Test the sweep table and the fitted slope."""
        md = ReportGenerator(sample_sweep).to_markdown()
        assert "| fratio | 1024 |" in md
        assert "0.66" in md

    def test_concentration_markdown(self, sample_violations):
        """Test the pass/fail line of a concentration report."""
        md = ReportGenerator(sample_violations).to_markdown()
        assert "# Concentration Report (matrix)" in md
        assert "PASS" in md

    def test_lower_bound_markdown(self):
        """Test one row per suite entry."""
        report = LowerBoundReport(
            suite="unknown",
            horizon=4096,
            entries=[
                LowerBoundEntry(
                    instance_name="lb-unknown-p1",
                    target_low=0.5,
                    target_high=0.5625,
                    mean_regret=31.0,
                    modal_costs=[0.5, 0.5],
                    matches=2,
                    seeds=2,
                )
            ],
        )
        md = ReportGenerator(report).to_markdown()
        assert "lb-unknown-p1" in md
        assert "2/2" in md


class TestReportGeneratorSave:
    """Tests for ReportGenerator.save()."""

    @pytest.mark.parametrize(
        "name,marker",
        [("out.csv", "instance,T,mean"), ("out.md", "# Regret Sweep"), ("out.json", '"variant"')],
    )
    def test_format_from_extension(self, sample_sweep, temp_dir, name, marker):
        """Test that the format follows the file extension."""
        path = ReportGenerator(sample_sweep).save(temp_dir / name)
        assert path.exists()
        assert marker in path.read_text()

    def test_explicit_format_and_nested_dir(self, sample_sweep, temp_dir):
        """Test an explicit format and parent directory creation."""
        path = ReportGenerator(sample_sweep).save(temp_dir / "a" / "b" / "report.txt", format="csv")
        assert path.read_text().startswith("instance,T,mean")


class TestGenerateReport:
    """Tests for generate_report."""

    def test_formats(self, sample_sweep):
        """Test the convenience wrapper for each format."""
        assert json.loads(generate_report(sample_sweep))["variant"] == "unknown"
        assert generate_report(sample_sweep, "csv").startswith("instance,T,mean")
        assert generate_report(sample_sweep, "md").startswith("# Regret Sweep")
