"""Tests for kernel configuration loading."""

import pytest
import yaml
from pydantic import ValidationError

from skew_aztec_kernels.infrastructure.config import KernelConfig


class TestKernelConfig:
    """Test cases for KernelConfig."""

    def test_defaults(self):
        config = KernelConfig.get_default_config()

        assert config.quadrature.circle_nodes == 256
        assert config.quadrature.tolerance == 1e-8
        assert config.enumeration.cell_cap == 60
        assert config.rcap == 6
        assert config.theta_rcap == 16
        assert not config.strict

    def test_from_yaml_file(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text(
            yaml.safe_dump(
                {"quadrature": {"circle_nodes": 512}, "rcap": 4, "strict": True}
            ),
            encoding="utf-8",
        )

        config = KernelConfig.from_file(path)

        assert config.quadrature.circle_nodes == 512
        assert config.quadrature.gamma0_radius == 0.5
        assert config.rcap == 4
        assert config.strict

    def test_json_is_accepted(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text('{"enumeration": {"cell_cap": 40}}', encoding="utf-8")

        assert KernelConfig.from_file(path).enumeration.cell_cap == 40

    def test_missing_file_gives_defaults(self, tmp_path):
        assert KernelConfig.from_file(tmp_path / "absent.yaml") == KernelConfig()

    def test_empty_file_gives_defaults(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")

        assert KernelConfig.from_file(path) == KernelConfig()

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text("nodes: 12\n", encoding="utf-8")

        with pytest.raises(ValidationError):
            KernelConfig.from_file(path)

    def test_inconsistent_contours_rejected(self, tmp_path):
        path = tmp_path / "config.yaml"
        path.write_text(
            "quadrature:\n  gamma0_radius: 2.0\n  line_abscissa: 1.0\n", encoding="utf-8"
        )

        with pytest.raises(ValidationError):
            KernelConfig.from_file(path)

    def test_load_without_path_keeps_current(self):
        config = KernelConfig(rcap=3)

        assert config.load(None) is config
