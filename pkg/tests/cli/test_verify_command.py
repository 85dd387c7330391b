"""
Tests for the verify command group.

Covers JSON reports and exit codes; the reference convergence sequences are
exercised by the slow acceptance tests.
"""

import json

import pytest
from typer.testing import CliRunner

from skew_aztec_kernels.cli.main import app


@pytest.fixture
def runner():
    """Create a CLI runner for testing."""
    return CliRunner()


class TestIdentitiesCommand:
    """Test cases for verify identities."""

    def test_duality_json(self, runner):
        result = runner.invoke(
            app,
            [
                "verify", "identities",
                "--n", "2", "--m", "3", "--M", "2", "--a", "0.5",
                "--suite", "duality", "--json",
            ],
        )

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["passed"] is True
        assert data["max_residual"] < 1e-8
        assert [c["name"] for c in data["checks"]] == ["duality_row_2"]

    def test_unknown_suite(self, runner):
        result = runner.invoke(
            app, ["verify", "identities", "--n", "1", "--m", "1", "--M", "1", "--suite", "nope"]
        )

        assert result.exit_code == 2

    def test_symbol_suite_at_unit_weight(self, runner):
        result = runner.invoke(
            app,
            ["verify", "identities", "--n", "1", "--m", "1", "--M", "1", "--a", "1", "--suite", "bo"],
        )

        assert result.exit_code == 1

    def test_report_file(self, runner, tmp_path):
        out = tmp_path / "identities.json"

        result = runner.invoke(
            app,
            [
                "verify", "identities",
                "--n", "2", "--m", "3", "--M", "2", "--a", "1",
                "--out", str(out),
            ],
        )

        assert result.exit_code == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["skipped"] == ["bo", "blowup", "dphi"]


class TestCorrelationsCommand:
    """Test cases for verify correlations."""

    def test_unit_domain(self, runner):
        result = runner.invoke(
            app,
            ["verify", "correlations", "--n", "1", "--m", "1", "--M", "1", "--a", "0.5", "--json"],
        )

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["suite"] == "correlations"
        assert data["passed"] is True


class TestConvergenceCommand:
    """Test cases for verify convergence."""

    def test_symmetry_is_not_asserted(self, runner):
        result = runner.invoke(app, ["verify", "convergence", "--theorem", "symmetry", "--json"])

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["asserted"] is False
        assert set(data["symmetry"]["value"]) == {"re", "im"}

    def test_single_n(self, runner):
        result = runner.invoke(
            app,
            [
                "verify", "convergence",
                "--theorem", "main",
                "--r", "1", "--rho", "1",
                "--y1", "0", "--y2", "0",
                "--ns", "16",
                "--json",
            ],
        )

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert len(data["main_rows"]) == 1
        assert len(data["discrepancies"]) == 1

    def test_unknown_theorem(self, runner):
        result = runner.invoke(app, ["verify", "convergence", "--theorem", "lemma"])

        assert result.exit_code == 2

    def test_malformed_sizes(self, runner):
        result = runner.invoke(app, ["verify", "convergence", "--ns", "64,many"])

        assert result.exit_code == 2

    def test_exploratory_needs_a_domain(self, runner):
        result = runner.invoke(app, ["verify", "convergence", "--theorem", "exploratory"])

        assert result.exit_code == 2

    def test_strip_narrower_than_r(self, runner):
        result = runner.invoke(
            app, ["verify", "convergence", "--r", "3", "--rho", "1", "--ns", "16"]
        )

        assert result.exit_code == 1
