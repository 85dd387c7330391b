"""Configuration management for skew-Aztec kernel computations."""

from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field

from skew_aztec_kernels.domain.services.limit_kernels import DEFAULT_THETA_RCAP
from skew_aztec_kernels.domain.services.oracle import DEFAULT_CELL_CAP
from skew_aztec_kernels.domain.services.prelimit_kernel import DEFAULT_RCAP
from skew_aztec_kernels.domain.services.quadrature import QuadratureConfig

__all__ = ["EnumerationConfig", "KernelConfig", "QuadratureConfig"]


class EnumerationConfig(BaseModel):
    """Limits of the exhaustive oracle."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    cell_cap: int = Field(default=DEFAULT_CELL_CAP, ge=2)


class KernelConfig(BaseModel):
    """Top-level configuration read from ``--config``."""

    model_config = ConfigDict(validate_assignment=True, extra="forbid")

    quadrature: QuadratureConfig = Field(default_factory=QuadratureConfig)
    enumeration: EnumerationConfig = Field(default_factory=EnumerationConfig)
    rcap: int = Field(default=DEFAULT_RCAP, ge=0)
    theta_rcap: int = Field(default=DEFAULT_THETA_RCAP, ge=0)
    strict: bool = False

    @classmethod
    def from_file(cls, config_path: Path) -> "KernelConfig":
        """Load configuration from a YAML or JSON file."""
        if not config_path.exists():
            return cls()

        with config_path.open(encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        return cls(**data)

    @classmethod
    def get_default_config(cls) -> "KernelConfig":
        """Get the default node counts, caps and tolerances."""
        return cls(
            quadrature=QuadratureConfig(),
            enumeration=EnumerationConfig(),
            rcap=DEFAULT_RCAP,
            theta_rcap=DEFAULT_THETA_RCAP,
        )

    def load(self, config_path: Path | None) -> "KernelConfig":
        """Configuration from ``config_path`` when given, else this one."""
        return self.from_file(config_path) if config_path else self
