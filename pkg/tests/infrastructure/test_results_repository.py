"""Tests for the results repository and its serialization helpers."""

import json

import pytest

from skew_aztec_kernels.domain.exceptions import DomainError
from skew_aztec_kernels.domain.models import DomainSpec, TacnodePoint
from skew_aztec_kernels.domain.services.sampler import initial_tiling
from skew_aztec_kernels.infrastructure.results_repository import (
    ResultsRepository,
    TilingRecord,
    csv_text,
    format_number,
    kernel_row,
    to_json,
)


@pytest.fixture
def repository():
    return ResultsRepository()


class TestSerialization:
    """Test cases for number formatting, JSON and CSV helpers."""

    def test_fifteen_significant_digits(self):
        assert format_number(1 / 3) == "0.333333333333333"
        assert format_number(2.0) == "2"

    def test_complex_split_into_parts(self):
        data = json.loads(to_json({"value": 1.5 - 2j, "n": 3}))

        assert data == {"value": {"re": 1.5, "im": -2.0}, "n": 3}

    def test_models_are_dumped(self):
        data = json.loads(to_json(DomainSpec(n=2, m=3, M=2, a=0.5)))

        assert data == {"n": 2, "m": 3, "M": 2, "a": 0.5}

    def test_kernel_row(self):
        row = kernel_row({"x1": 0, "y1": 0.5}, 0.25 + 0.125j, 1e-12)

        assert row == {
            "x1": "0",
            "y1": "0.5",
            "re": "0.25",
            "im": "0.125",
            "err_estimate": "1e-12",
        }

    def test_csv_uses_crlf(self):
        text = csv_text([{"a": 1, "b": 0.5}, {"a": 2, "b": 1 / 3}])

        assert text == "a,b\r\n1,0.5\r\n2,0.333333333333333\r\n"
        assert csv_text([]) == ""


class TestResultsRepository:
    """Test cases for file access."""

    def test_load_spec(self, repository, tmp_path):
        path = tmp_path / "spec.yaml"
        path.write_text("n: 2\nm: 3\nM: 2\na: 0.6\n", encoding="utf-8")

        assert repository.load_spec(path) == DomainSpec(n=2, m=3, M=2, a=0.6)

    def test_invalid_spec(self, repository, tmp_path):
        path = tmp_path / "spec.json"
        path.write_text('{"n": 0, "m": 1, "M": 1}', encoding="utf-8")

        with pytest.raises(DomainError):
            repository.load_spec(path)

    def test_missing_file(self, repository, tmp_path):
        with pytest.raises(DomainError, match="does not exist"):
            repository.load_spec(tmp_path / "absent.json")

    def test_load_points(self, repository, tmp_path):
        path = tmp_path / "points.json"
        path.write_text('[{"first": [2, 1], "second": [0, -1]}]', encoding="utf-8")

        (record,) = repository.load_points(path)

        assert record.first == (2.0, 1.0)
        assert record.second == (0.0, -1.0)

    def test_tacnode_points(self, repository, tmp_path):
        path = tmp_path / "points.yaml"
        path.write_text("- first: [0, 0.5]\n  second: [1, -0.5]\n", encoding="utf-8")

        assert repository.load_tacnode_points(path) == [
            (TacnodePoint(tau=0, y=0.5), TacnodePoint(tau=1, y=-0.5))
        ]

    def test_fractional_tau_rejected(self, repository, tmp_path):
        path = tmp_path / "points.yaml"
        path.write_text("- first: [0.5, 0]\n  second: [1, 0]\n", encoding="utf-8")

        with pytest.raises(DomainError):
            repository.load_tacnode_points(path)

    def test_malformed_points_rejected(self, repository, tmp_path):
        path = tmp_path / "points.json"
        path.write_text('[{"first": [1, 2]}]', encoding="utf-8")

        with pytest.raises(DomainError):
            repository.load_points(path)

    def test_tiling_file_round_trip(self, repository, tmp_path, case1_spec):
        t = initial_tiling(case1_spec)
        path = tmp_path / "out" / "tiling.json"

        repository.save_tiling(t, path)

        assert repository.load_tiling(path) == t

    def test_broken_tiling_rejected(self, repository, tmp_path, unit_spec):
        record = TilingRecord.of(initial_tiling(unit_spec))
        record.dominoes = record.dominoes[:-1]
        path = tmp_path / "tiling.json"
        path.write_text(record.model_dump_json(), encoding="utf-8")

        with pytest.raises(DomainError):
            repository.load_tiling(path)

    def test_jsonl_appends(self, repository, tmp_path):
        path = tmp_path / "runs.jsonl"

        assert repository.append_jsonl([{"k": 1}, {"k": 2}], path) == 2
        repository.append_jsonl([{"k": 3.5 + 1j}], path)

        assert repository.read_jsonl(path) == [
            {"k": 1},
            {"k": 2},
            {"k": {"re": 3.5, "im": 1.0}},
        ]

    def test_csv_round_trip(self, repository, tmp_path):
        path = tmp_path / "table.csv"

        repository.write_csv([kernel_row({"n": 64}, 0.5 + 0j, 0.0)], path)

        assert repository.read_csv(path) == [
            {"n": "64", "re": "0.5", "im": "0", "err_estimate": "0"}
        ]
