"""
Verify Command Implementation

This module implements the `verify` CLI group:

- identities: finite-n kernel identities (duality, biorthogonality, blow-up, Phi)
- correlations: determinantal formulas against exhaustive enumeration
- convergence: pre-limit to tacnode and tacnode to cusp-Airy experiments

Every command exits with status 1 when an asserted check fails.
"""

import logging
from pathlib import Path
from typing import Any

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from skew_aztec_kernels.application.convergence_use_case import (
    REFERENCE_NS,
    REFERENCE_POINTS,
    REFERENCE_RS,
    ConvergenceRequest,
    ConvergenceResult,
    ConvergenceUseCase,
)
from skew_aztec_kernels.application.verification_use_case import (
    CorrelationVerificationRequest,
    CorrelationVerificationUseCase,
    IdentityVerificationRequest,
    IdentityVerificationUseCase,
    VerificationResult,
)
from skew_aztec_kernels.domain.exceptions import SkewAztecError
from skew_aztec_kernels.domain.models import TacnodeParams, TacnodePoint
from skew_aztec_kernels.infrastructure.results_repository import (
    ResultsRepository,
    format_number,
    to_json,
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
    name="verify",
    help="Check kernel identities, correlations and limit theorems numerically",
)

SUITES = ("duality", "bo", "blowup", "dphi", "all")
THEOREMS = ("main", "cusp", "symmetry", "exploratory")


def _verification_payload(result: VerificationResult) -> dict[str, Any]:
    payload = result.model_dump()
    payload["passed"] = result.passed
    payload["max_residual"] = result.max_residual
    return payload


def _display_verification(result: VerificationResult) -> None:
    spec = result.spec
    console.print(
        f"\n[bold blue]{result.suite}[/bold blue] on ({spec.n}, {spec.m}, {spec.M}) "
        f"at a={spec.a}"
    )
    table = Table()
    table.add_column("check")
    table.add_column("samples", justify="right")
    table.add_column("residual", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("", justify="center")
    for c in result.checks:
        mark = "[green]✓[/green]" if c.passed else "[red]✗[/red]"
        table.add_row(c.name, str(c.samples), f"{c.residual:.3e}", f"{c.tolerance:.0e}", mark)
    console.print(table)
    for suite in result.skipped:
        console.print(f"[yellow]⚠[/yellow] Skipped {suite}")
    status = "[green]passed[/green]" if result.passed else "[red]FAILED[/red]"
    console.print(f"Result: {status} (max residual {result.max_residual:.3e})")


def _finish(payload: Any, passed: bool, as_json: bool, output_file: Path | None) -> None:
    if output_file:
        ResultsRepository().write_json(payload, output_file)
        console.print(f"[green]✓[/green] Report written to {output_file}")
    if as_json:
        typer.echo(to_json(payload))
    if not passed:
        raise typer.Exit(1)


@app.command("identities")
def identities_command(
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    a: float | None = typer.Option(None, "--a", help="Vertical domino weight in (0, 1]"),
    spec_path: Path | None = spec_option(),
    suite: str = typer.Option("all", "--suite", help=f"One of {', '.join(SUITES)}"),
    p: int | None = typer.Option(None, "--p", help="Size of the biorthogonality block"),
    output_file: Path | None = typer.Option(None, "--out", "-o", help="JSON report file"),
    config_path: Path | None = config_option(),
    as_json: bool = typer.Option(False, "--json", help="Machine-readable output"),
    verbose: bool = verbose_option(),
) -> None:
    """
    Finite-n identities of the kernel building blocks.

    Examples:
        verify identities --n 3 --m 4 --M 2 --a 0.5
        verify identities --spec domain.yaml --suite duality
    """
    setup_logging(verbose)
    if suite not in SUITES:
        raise typer.BadParameter(f"Unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    try:
        config = load_config(config_path)
        spec = resolve_spec(spec_path, n, m, cuts, a)
        request = IdentityVerificationRequest(spec=spec, suite=suite, p=p)  # type: ignore[arg-type]
        result = IdentityVerificationUseCase(config).execute(request)
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e

    if not as_json:
        _display_verification(result)
    _finish(_verification_payload(result), result.passed, as_json, output_file)


@app.command("correlations")
def correlations_command(
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    a: float | None = typer.Option(None, "--a", help="Vertical domino weight in (0, 1]"),
    spec_path: Path | None = spec_option(),
    pairs: int = typer.Option(20, "--pairs", help="Random pairs per comparison"),
    seed: int = typer.Option(0, "--seed", help="Random seed for the pair choice"),
    output_file: Path | None = typer.Option(None, "--out", "-o", help="JSON report file"),
    config_path: Path | None = config_option(),
    as_json: bool = typer.Option(False, "--json", help="Machine-readable output"),
    verbose: bool = verbose_option(),
) -> None:
    """
    Kenyon and red-gap determinants against exhaustive enumeration.

    Examples:
        verify correlations --n 2 --m 3 --M 2 --a 0.5 --pairs 50
    """
    setup_logging(verbose)
    try:
        config = load_config(config_path)
        spec = resolve_spec(spec_path, n, m, cuts, a)
        request = CorrelationVerificationRequest(spec=spec, pairs=pairs, seed=seed)
        result = CorrelationVerificationUseCase(config).execute(request)
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e

    if not as_json:
        _display_verification(result)
    _finish(_verification_payload(result), result.passed, as_json, output_file)


def _parse_floats(text: str, name: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise typer.BadParameter(f"{name} must be a comma-separated list of numbers") from e


@app.command("convergence")
def convergence_command(
    theorem: str = typer.Option(
        "main", "--theorem", help=f"One of {', '.join(THEOREMS)}"
    ),
    r: int = typer.Option(1, "--r", help="Minimal number of red dots per strip line"),
    rho: int = typer.Option(2, "--rho", help="Strip width"),
    beta: float = typer.Option(0.0, "--beta", help="Weight scaling beta"),
    tau1: int = typer.Option(REFERENCE_POINTS[0].tau, "--tau1", help="First tau"),
    y1: float = typer.Option(REFERENCE_POINTS[0].y, "--y1", help="First y (or xi for cusp)"),
    tau2: int = typer.Option(REFERENCE_POINTS[1].tau, "--tau2", help="Second tau"),
    y2: float = typer.Option(REFERENCE_POINTS[1].y, "--y2", help="Second y (or xi for cusp)"),
    ns: str = typer.Option(
        ",".join(str(v) for v in REFERENCE_NS), "--ns", help="Sizes n of the pre-limit sequence"
    ),
    rs: str = typer.Option(
        ",".join(str(v) for v in REFERENCE_RS), "--rs", help="Values of r for the cusp limit"
    ),
    n: int | None = typer.Option(None, "--n", help="Width n (exploratory)"),
    m: int | None = typer.Option(None, "--m", help="Length m (exploratory)"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M (exploratory)"),
    a: float | None = typer.Option(None, "--a", help="Vertical weight (exploratory)"),
    spec_path: Path | None = spec_option(),
    output_file: Path | None = typer.Option(
        None, "--out", "-o", help="JSON report file, e.g. report.json"
    ),
    config_path: Path | None = config_option(),
    as_json: bool = typer.Option(False, "--json", help="Machine-readable output"),
    verbose: bool = verbose_option(),
) -> None:
    """
    Convergence of the pre-limit kernel to the tacnode kernel, and beyond.

    Examples:
        verify convergence --theorem main --out report.json
        verify convergence --theorem cusp --rs 4,8,16 --y1 0.3 --y2 -0.2
        verify convergence --theorem exploratory --n 40 --m 45 --M 30
    """
    setup_logging(verbose)
    if theorem not in THEOREMS:
        raise typer.BadParameter(
            f"Unknown theorem {theorem!r}; choose from {', '.join(THEOREMS)}"
        )
    try:
        config = load_config(config_path)
        spec = None
        if theorem == "exploratory":
            spec = resolve_spec(spec_path, n, m, cuts, a)
        request = ConvergenceRequest(
            theorem=theorem,  # type: ignore[arg-type]
            params=TacnodeParams(r=r, rho=rho, beta=beta),
            p1=TacnodePoint(tau=tau1, y=y1),
            p2=TacnodePoint(tau=tau2, y=y2),
            ns=[int(v) for v in _parse_floats(ns, "--ns")],
            rs=[int(v) for v in _parse_floats(rs, "--rs")],
            xi1=y1,
            xi2=y2,
            spec=spec,
        )
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
            disable=as_json,
        ) as progress:
            task = progress.add_task(f"Running {theorem} experiment...", total=None)
            result = ConvergenceUseCase(config).execute(request)
            progress.update(task, description="Experiment finished!")
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e

    if not as_json:
        _display_convergence(result)
    payload = result.model_dump()
    payload["discrepancies"] = [row.discrepancy for row in result.main_rows or result.cusp_rows]
    _finish(payload, result.passed or not result.asserted, as_json, output_file)


def _display_convergence(result: ConvergenceResult) -> None:
    console.print(f"\n[bold blue]Convergence experiment:[/bold blue] {result.theorem}")
    if result.main_rows:
        table = Table(title="Pre-limit against tacnode")
        for column in ("n", "pre-limit", "limit", "err", "discrepancy"):
            table.add_column(column, justify="right")
        for row in result.main_rows:
            table.add_row(
                str(row.n),
                format_number(row.prelimit.real),
                format_number(row.limit.real),
                f"{row.err_estimate:.1e}",
                f"{row.discrepancy:.3e}",
            )
        console.print(table)
    if result.cusp_rows:
        table = Table(title="Scaled tacnode against cusp-Airy")
        for column in ("r", "scaled tacnode", "cusp-Airy", "discrepancy"):
            table.add_column(column, justify="right")
        for row in result.cusp_rows:
            table.add_row(
                str(row.r),
                format_number(row.scaled_tacnode.real),
                format_number(row.cusp_airy),
                f"{row.discrepancy:.3e}",
            )
        console.print(table)
    if result.symmetry is not None:
        report = result.symmetry
        console.print(
            f"L = {format_number(report.value.real)}, mirrored "
            f"{format_number(report.mirrored_value.real)}, residual {report.residual:.3e} "
            f"(quadrature {report.err_estimate:.1e})"
        )
    if result.exploratory_rows:
        table = Table(title="Rescaled finite density against tacnode diagonal")
        for column in ("tau", "y", "xi", "eta", "finite", "limit", "err"):
            table.add_column(column, justify="right")
        for row in result.exploratory_rows:
            table.add_row(
                str(row.tau),
                format_number(row.y),
                str(row.xi),
                str(row.eta),
                format_number(row.finite),
                format_number(row.limit.real),
                f"{row.err_estimate:.1e}",
            )
        console.print(table)
    if result.ratios:
        console.print(f"Successive ratios: {', '.join(f'{q:.3f}' for q in result.ratios)}")
    if result.airy_residual is not None:
        console.print(f"A_0 against the Airy series: {result.airy_residual:.3e}")
    for note in result.notes:
        console.print(f"[dim]{note}[/dim]")
    if result.asserted:
        status = "[green]passed[/green]" if result.passed else "[red]FAILED[/red]"
        console.print(f"Result: {status}")
