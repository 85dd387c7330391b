"""
Kernel Command Implementation

This module implements the `kernel` CLI group. Each sub-command reads a list of
point pairs and evaluates one correlation kernel at every pair:

- finite: the reduced Kasteleyn kernel at lattice points (xi, eta)
- prelimit: the double-contour kernel at scaled points (x, y)
- tacnode: the discrete tacnode kernel at (tau, y)
- cusp-airy: the cusp-Airy kernel at (tau, xi)

Rows are written as CSV (inputs, re, im, err_estimate) with every number at
15 significant digits.
"""

import logging
from pathlib import Path

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from skew_aztec_kernels.application.kernel_tabulation_use_case import (
    KernelKind,
    KernelTable,
    KernelTabulationRequest,
    KernelTabulationUseCase,
)
from skew_aztec_kernels.domain.exceptions import SkewAztecError
from skew_aztec_kernels.domain.models import DomainSpec, TacnodeParams
from skew_aztec_kernels.infrastructure.config import KernelConfig
from skew_aztec_kernels.infrastructure.results_repository import (
    ResultsRepository,
    csv_text,
)

from .common import (
    config_option,
    load_config,
    resolve_spec,
    setup_logging,
    spec_option,
    verbose_option,
)

logger = logging.getLogger(__name__)
console = Console()

app = typer.Typer(
    name="kernel",
    help="Tabulate finite, pre-limit and limit correlation kernels",
)


def _points_option() -> Path:
    return typer.Option(
        ..., "--points", help="JSON/YAML list of {first: [a, b], second: [c, d]}"
    )


def _out_option() -> Path | None:
    return typer.Option(None, "--out", "-o", help="CSV output file (stdout if omitted)")


def _tabulate(
    kind: KernelKind,
    points_path: Path,
    output_file: Path | None,
    config: KernelConfig,
    repository: ResultsRepository,
    spec: DomainSpec | None = None,
    params: TacnodeParams | None = None,
    with_kred: bool = False,
) -> None:
    records = repository.load_points(points_path)
    request = KernelTabulationRequest(
        kind=kind,
        pairs=[(rec.first, rec.second) for rec in records],
        spec=spec,
        params=params,
        with_kred=with_kred,
    )
    table = KernelTabulationUseCase(config).execute(request)
    if output_file:
        repository.write_csv(table.rows, output_file)
        console.print(
            f"[green]✓[/green] {len(table.rows)} {kind} kernel values written to {output_file}"
        )
        _display_error_budget(table)
    else:
        typer.echo(csv_text(table.rows), nl=False)


def _display_error_budget(table: KernelTable) -> None:
    if table.max_err_estimate == 0.0:
        return
    summary = Table(show_header=False)
    summary.add_row("Largest quadrature error estimate", f"{table.max_err_estimate:.3e}")
    console.print(summary)


def _fail(e: Exception) -> None:
    console.print(f"[red]✗[/red] Error: {e}")
    raise typer.Exit(1) from e


@app.command("finite")
def finite_command(
    points_path: Path = _points_option(),
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    a: float | None = typer.Option(None, "--a", help="Vertical domino weight in (0, 1]"),
    spec_path: Path | None = spec_option(),
    output_file: Path | None = _out_option(),
    config_path: Path | None = config_option(),
    verbose: bool = verbose_option(),
) -> None:
    """
    Reduced finite kernel K^red at lattice points (xi, eta).

    Examples:
        kernel finite --n 3 --m 4 --M 2 --a 0.5 --points pairs.json --out finite.csv
    """
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        config = load_config(config_path)
        spec = resolve_spec(spec_path, n, m, cuts, a, repository)
        _tabulate("finite", points_path, output_file, config, repository, spec=spec)
    except (SkewAztecError, ValidationError) as e:
        _fail(e)


@app.command("prelimit")
def prelimit_command(
    points_path: Path = _points_option(),
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    a: float | None = typer.Option(None, "--a", help="Vertical domino weight in (0, 1]"),
    spec_path: Path | None = spec_option(),
    with_kred: bool = typer.Option(
        False, "--kred", help="Multiply by the gauge factor to compare with K^red"
    ),
    output_file: Path | None = _out_option(),
    config_path: Path | None = config_option(),
    verbose: bool = verbose_option(),
) -> None:
    """
    Pre-limit double-contour kernel at scaled points (x, y).

    Only Case 1 domains with delta <= 0 are supported.

    Examples:
        kernel prelimit --n 64 --m 65 --M 63 --a 1 --points xy.json
    """
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        config = load_config(config_path)
        spec = resolve_spec(spec_path, n, m, cuts, a, repository)
        _tabulate(
            "prelimit",
            points_path,
            output_file,
            config,
            repository,
            spec=spec,
            with_kred=with_kred,
        )
    except (SkewAztecError, ValidationError) as e:
        _fail(e)


@app.command("tacnode")
def tacnode_command(
    points_path: Path = _points_option(),
    r: int = typer.Option(..., "--r", help="Minimal number of red dots per strip line"),
    rho: int = typer.Option(..., "--rho", help="Strip width"),
    beta: float = typer.Option(0.0, "--beta", help="Weight scaling beta"),
    output_file: Path | None = _out_option(),
    config_path: Path | None = config_option(),
    verbose: bool = verbose_option(),
) -> None:
    """
    Discrete tacnode kernel at (tau, y); tau must be an integer.

    Examples:
        kernel tacnode --r 1 --rho 2 --beta 0 --points tau_y.json --out tacnode.csv
    """
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        config = load_config(config_path)
        params = TacnodeParams(r=r, rho=rho, beta=beta)
        _tabulate("tacnode", points_path, output_file, config, repository, params=params)
    except (SkewAztecError, ValidationError) as e:
        _fail(e)


@app.command("cusp-airy")
def cusp_airy_command(
    points_path: Path = _points_option(),
    output_file: Path | None = _out_option(),
    config_path: Path | None = config_option(),
    verbose: bool = verbose_option(),
) -> None:
    """
    Cusp-Airy kernel at (tau, xi); tau must be an integer.

    Examples:
        kernel cusp-airy --points tau_xi.json --out cusp.csv
    """
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        config = load_config(config_path)
        _tabulate("cusp-airy", points_path, output_file, config, repository)
    except (SkewAztecError, ValidationError) as e:
        _fail(e)
