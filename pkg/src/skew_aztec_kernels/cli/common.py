"""Shared setup for CLI commands: logging, configuration and domain specs."""

import logging
from pathlib import Path

import typer
from rich.console import Console
from rich.logging import RichHandler

from skew_aztec_kernels.domain.models import DomainSpec
from skew_aztec_kernels.infrastructure.config import KernelConfig
from skew_aztec_kernels.infrastructure.results_repository import ResultsRepository

console = Console()


def setup_logging(verbose: bool) -> None:
    """Route log records through rich; DEBUG when verbose, WARNING otherwise."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def load_config(config_path: Path | None) -> KernelConfig:
    """KernelConfig from ``--config`` or the defaults."""
    if config_path is None:
        return KernelConfig.get_default_config()
    if not config_path.exists():
        raise typer.BadParameter(f"Config file does not exist: {config_path}")
    return KernelConfig.from_file(config_path)


def resolve_spec(
    spec_path: Path | None,
    n: int | None,
    m: int | None,
    cuts: int | None,
    a: float | None,
    repository: ResultsRepository | None = None,
) -> DomainSpec:
    """Domain from ``--spec`` or from ``--n --m --M``; ``--a`` overrides the weight."""
    if spec_path is not None:
        spec = (repository or ResultsRepository()).load_spec(spec_path)
        return spec.with_weight(a) if a is not None else spec
    if n is None or m is None or cuts is None:
        raise typer.BadParameter("Give --spec FILE or all of --n, --m and --M")
    return DomainSpec(n=n, m=m, M=cuts, a=1.0 if a is None else a)


def spec_option() -> Path | None:
    return typer.Option(None, "--spec", help="JSON/YAML file with n, m, M and optional a")


def config_option() -> Path | None:
    return typer.Option(None, "--config", help="YAML/JSON file with kernel configuration")


def verbose_option() -> bool:
    return typer.Option(False, "--verbose", "-v", help="Verbose output")
