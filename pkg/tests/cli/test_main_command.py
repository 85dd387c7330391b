"""
Tests for the top-level commands.

Covers:
- check: tilability verdicts and the simulated domains
- enumerate: counts, weight polynomial and JSONL output
- sample: output files, statistics and option errors
- render: stored and initial tilings
"""

import json

import pytest
from typer.testing import CliRunner

from skew_aztec_kernels.cli.main import app


@pytest.fixture
def runner():
    """Create a CLI runner for testing."""
    return CliRunner()


class TestCheckCommand:
    """Test cases for the check command."""

    def test_unit_domain_json(self, runner):
        result = runner.invoke(app, ["check", "--n", "1", "--m", "1", "--M", "1", "--json"])

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["tilable"] is True
        assert data["case"] == "Case1"
        assert all(row["dots"] <= 1 for row in data["profile"])

    def test_untilable_domain_is_reported(self, runner):
        result = runner.invoke(app, ["check", "--n", "1", "--m", "3", "--M", "5"])

        assert result.exit_code == 0
        assert "not tilable" in result.stdout

    def test_simulated_domains(self, runner):
        result = runner.invoke(app, ["check", "--simulated", "--json"])

        assert result.exit_code == 0
        rows = json.loads(result.stdout)
        assert [(r["rho"], r["r"], r["case"]) for r in rows] == [
            (61, 11, "Case1"),
            (20, 4, "Case2"),
            (1, 41, "Case1"),
            (5, 6, "Case1"),
        ]
        assert rows[1]["filaments"] == "all but yellow"

    def test_spec_file(self, runner, tmp_path):
        spec = tmp_path / "spec.yaml"
        spec.write_text("n: 8\nm: 10\nM: 3\n", encoding="utf-8")

        result = runner.invoke(app, ["check", "--spec", str(spec), "--json"])

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        counts = [row["dots"] for row in data["profile"]]
        assert min(counts) == data["r"]
        assert max(counts) <= 8
        assert sum(row["region"] == "strip" for row in data["profile"]) == data["rho"] + 1

    def test_missing_dimensions(self, runner):
        result = runner.invoke(app, ["check", "--n", "2"])

        assert result.exit_code == 2

    def test_invalid_dimensions(self, runner):
        result = runner.invoke(app, ["check", "--n", "0", "--m", "1", "--M", "1"])

        assert result.exit_code == 1
        assert "Error" in result.stdout


class TestEnumerateCommand:
    """Test cases for the enumerate command."""

    def test_unit_domain(self, runner):
        result = runner.invoke(
            app, ["enumerate", "--n", "1", "--m", "1", "--M", "1", "--a", "0.5", "--json"]
        )

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["count"] == 3
        assert data["coefficients"] == [1, 0, 2]
        assert data["partition_function"] == 1.5
        assert {k: data["spec"][k] for k in ("n", "m", "M", "a")} == {"n": 1, "m": 1, "M": 1, "a": 0.5}

    def test_jsonl_output(self, runner, tmp_path):
        out = tmp_path / "tilings.jsonl"

        result = runner.invoke(
            app, ["enumerate", "--n", "2", "--m", "3", "--M", "2", "--out", str(out)]
        )

        assert result.exit_code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) > 1
        assert json.loads(lines[0])["spec"]["M"] == 2

    def test_cell_cap_from_config(self, runner, tmp_path):
        config = tmp_path / "config.yaml"
        config.write_text("enumeration:\n  cell_cap: 10\n", encoding="utf-8")

        result = runner.invoke(
            app,
            ["enumerate", "--n", "3", "--m", "3", "--M", "2", "--config", str(config)],
        )

        assert result.exit_code == 1

    def test_missing_config_file(self, runner, tmp_path):
        result = runner.invoke(
            app,
            [
                "enumerate",
                "--n", "1", "--m", "1", "--M", "1",
                "--config", str(tmp_path / "absent.yaml"),
            ],
        )

        assert result.exit_code == 2


class TestSampleCommand:
    """Test cases for the sample command."""

    def test_outputs(self, runner, tmp_path):
        svg, stats, tiling = tmp_path / "t.svg", tmp_path / "s.csv", tmp_path / "t.json"

        result = runner.invoke(
            app,
            [
                "sample",
                "--n", "2", "--m", "3", "--M", "2", "--a", "0.6",
                "--steps", "2000", "--burn-in", "200", "--seed", "1",
                "--svg", str(svg), "--stats", str(stats), "--tiling", str(tiling),
                "--paths", "red", "--paths", "green",
                "--json",
            ],
        )

        assert result.exit_code == 0
        data = json.loads(result.stdout)
        assert data["profile_matches"] is True
        assert data["steps"] == 2000
        assert data["burn_in"] == 200
        assert data["proposals"] == 2200
        assert 'id="red-paths"' in svg.read_text(encoding="utf-8")
        assert stats.read_text(encoding="utf-8").startswith("xi,red_dots,expected")
        assert json.loads(tiling.read_text(encoding="utf-8"))["spec"]["n"] == 2

    def test_table_output(self, runner):
        result = runner.invoke(app, ["sample", "--n", "1", "--m", "1", "--M", "1", "--steps", "100"])

        assert result.exit_code == 0
        assert "Acceptance rate" in result.stdout

    def test_unknown_path_colour(self, runner):
        result = runner.invoke(
            app, ["sample", "--n", "1", "--m", "1", "--M", "1", "--paths", "purple"]
        )

        assert result.exit_code == 2

    def test_untilable_domain(self, runner):
        result = runner.invoke(app, ["sample", "--n", "1", "--m", "3", "--M", "5", "--steps", "10"])

        assert result.exit_code == 1

    def test_weight_out_of_range(self, runner):
        result = runner.invoke(
            app, ["sample", "--n", "1", "--m", "1", "--M", "1", "--a", "1.5"]
        )

        assert result.exit_code == 1


class TestRenderCommand:
    """Test cases for the render command."""

    def test_initial_tiling(self, runner, tmp_path):
        out = tmp_path / "initial.svg"

        result = runner.invoke(
            app, ["render", "--n", "2", "--m", "1", "--M", "3", "--out", str(out), "--cell-px", "4"]
        )

        assert result.exit_code == 0
        assert out.read_text(encoding="utf-8").startswith("<svg")

    def test_stored_tiling(self, runner, tmp_path):
        tiling, out = tmp_path / "t.json", tmp_path / "t.svg"
        runner.invoke(
            app,
            ["sample", "--n", "2", "--m", "3", "--M", "2", "--steps", "500", "--tiling", str(tiling)],
        )

        result = runner.invoke(
            app, ["render", "--tiling", str(tiling), "--out", str(out), "--paths", "blue"]
        )

        assert result.exit_code == 0
        assert 'id="blue-paths"' in out.read_text(encoding="utf-8")

    def test_corrupt_tiling_file(self, runner, tmp_path):
        tiling = tmp_path / "t.json"
        tiling.write_text('{"spec": {"n": 1, "m": 1, "M": 1}, "dominoes": []}', encoding="utf-8")

        result = runner.invoke(
            app, ["render", "--tiling", str(tiling), "--out", str(tmp_path / "t.svg")]
        )

        assert result.exit_code == 1

    def test_output_is_required(self, runner):
        result = runner.invoke(app, ["render", "--n", "1", "--m", "1", "--M", "1"])

        assert result.exit_code == 2
