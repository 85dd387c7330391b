"""Main CLI interface for skew-aztec-kernels."""

import json
from pathlib import Path

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from skew_aztec_kernels.application.sampling_use_case import (
    SamplingRequest,
    SamplingResult,
    SamplingUseCase,
)
from skew_aztec_kernels.domain.exceptions import SkewAztecError
from skew_aztec_kernels.domain.models import (
    ChainConfig,
    DomainSpec,
    PathColor,
    RenderStyle,
)
from skew_aztec_kernels.domain.services.geometry import (
    boundary_profile_table,
    derived_params,
    is_tilable,
)
from skew_aztec_kernels.domain.services.oracle import enumerate_tilings, iter_tilings
from skew_aztec_kernels.domain.services.rendering import render_svg
from skew_aztec_kernels.domain.services.sampler import initial_tiling
from skew_aztec_kernels.infrastructure.results_repository import (
    ResultsRepository,
    TilingRecord,
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
from .kernel_command import app as kernel_app
from .verify_command import app as verify_app

app = typer.Typer(
    name="skew-aztec-kernels",
    help="Domino tilings of skew-Aztec rectangles and their tacnode kernels",
)
console = Console()

app.add_typer(kernel_app, name="kernel")
app.add_typer(verify_app, name="verify")

# (n, m, M) of the four simulated domains with their filament colours
SIMULATED_DOMAINS: tuple[tuple[str, int, int, int, str], ...] = (
    ("i", 100, 150, 90, "all but blue"),
    ("ii", 104, 100, 121, "all but yellow"),
    ("iii", 190, 150, 150, "all but blue"),
    ("iv", 100, 99, 95, "all but blue"),
)


def _parse_paths(values: list[str] | None) -> frozenset[PathColor]:
    try:
        return frozenset(PathColor(v.lower()) for v in values or [])
    except ValueError as e:
        raise typer.BadParameter(f"Path colours are red, blue or green: {e}") from e


@app.command()
def check(
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    spec_path: Path | None = spec_option(),
    simulated: bool = typer.Option(
        False, "--simulated", help="Show the parameters of the four simulated domains"
    ),
    as_json: bool = typer.Option(False, "--json", help="Machine-readable output"),
    verbose: bool = verbose_option(),
) -> None:
    """Tilability verdict, derived parameters and red-dot profile of a domain."""
    setup_logging(verbose)
    try:
        rows = []
        if simulated:
            for label, fn, fm, fM, filaments in SIMULATED_DOMAINS:
                rows.append(
                    _check_row(DomainSpec(n=fn, m=fm, M=fM)) | {"label": label, "filaments": filaments}
                )
        else:
            rows.append(_check_row(resolve_spec(spec_path, n, m, cuts, None)))
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e

    if as_json:
        payload = rows if simulated else rows[0]
        typer.echo(json.dumps(payload, indent=2))
        return
    if simulated:
        _display_simulated(rows)
    else:
        _display_check(rows[0])


def _check_row(spec: DomainSpec) -> dict:
    verdict = is_tilable(spec.n, spec.m, spec.M)
    params = derived_params(spec.n, spec.m, spec.M)
    row = {
        "n": spec.n,
        "m": spec.m,
        "M": spec.M,
        "tilable": verdict.tilable,
        "case": verdict.case.value,
        "delta": params.delta,
        "sigma": params.sigma,
        "kappa": params.kappa,
        "rho": params.rho,
        "r": params.r,
    }
    if verdict.tilable:
        row["profile"] = boundary_profile_table(spec)
    return row


def _display_check(row: dict) -> None:
    status = "[green]tilable[/green]" if row["tilable"] else "[red]not tilable[/red]"
    console.print(
        f"\n[bold blue]Skew-Aztec rectangle[/bold blue] n={row['n']}, m={row['m']}, M={row['M']}: "
        f"{status} ({row['case']})"
    )
    console.print(
        f"  Δ={row['delta']}, σ={row['sigma']}, κ={row['kappa']}, ρ={row['rho']}, 𝔯={row['r']}"
    )
    if "profile" not in row:
        return
    table = Table(title="Red dots per line")
    for column in ("xi", "region", "height_left", "height_right", "dots"):
        table.add_column(column, justify="right")
    for entry in row["profile"]:
        table.add_row(*(str(entry[c]) for c in ("xi", "region", "height_left", "height_right", "dots")))
    console.print(table)


def _display_simulated(rows: list[dict]) -> None:
    table = Table(title="Simulated domains")
    for column in ("label", "n", "m", "M", "ρ", "𝔯", "Δ", "case", "filaments"):
        table.add_column(column)
    for row in rows:
        table.add_row(
            row["label"],
            str(row["n"]),
            str(row["m"]),
            str(row["M"]),
            str(row["rho"]),
            str(row["r"]),
            str(row["delta"]),
            row["case"],
            row["filaments"],
        )
    console.print(table)


@app.command("enumerate")
def enumerate_tilings_command(
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    a: float | None = typer.Option(None, "--a", help="Vertical domino weight in (0, 1]"),
    spec_path: Path | None = spec_option(),
    output_file: Path | None = typer.Option(
        None, "--out", "-o", help="Write every tiling as one JSON line"
    ),
    config_path: Path | None = config_option(),
    as_json: bool = typer.Option(False, "--json", help="Machine-readable output"),
    verbose: bool = verbose_option(),
) -> None:
    """Exhaustively enumerate the tilings of a small domain."""
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        config = load_config(config_path)
        spec = resolve_spec(spec_path, n, m, cuts, a, repository)
        cap = config.enumeration.cell_cap
        result = enumerate_tilings(spec, cap=cap)
        written = 0
        if output_file:
            written = repository.append_jsonl(
                (TilingRecord.of(t) for t in iter_tilings(spec, cap)), output_file
            )
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e

    payload = {
        "spec": spec,
        "count": result.count,
        "coefficients": list(result.coefficients),
        "partition_function": float(result.partition_function),
    }
    if as_json:
        typer.echo(to_json(payload))
        return
    console.print(f"[bold blue]Tilings of[/bold blue] ({spec.n}, {spec.m}, {spec.M}): {result.count}")
    console.print(f"  Weight polynomial coefficients (by vertical count): {list(result.coefficients)}")
    console.print(f"  Partition function at a={spec.a}: {format_number(float(result.partition_function))}")
    if output_file:
        console.print(f"[green]✓[/green] {written} tilings written to {output_file}")


@app.command()
def sample(
    n: int | None = typer.Option(None, "--n", help="Width n"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    a: float | None = typer.Option(None, "--a", help="Vertical domino weight in (0, 1]"),
    spec_path: Path | None = spec_option(),
    steps: int = typer.Option(100_000, "--steps", help="Flip proposals after the burn-in"),
    burn_in: int = typer.Option(0, "--burn-in", help="Proposals discarded first"),
    seed: int = typer.Option(0, "--seed", help="Random seed"),
    svg_path: Path | None = typer.Option(None, "--svg", help="Write the final tiling as SVG"),
    stats_path: Path | None = typer.Option(
        None, "--stats", help="Write red-dot counts per line as CSV"
    ),
    tiling_path: Path | None = typer.Option(
        None, "--tiling", help="Write the final tiling as JSON"
    ),
    paths: list[str] | None = typer.Option(
        None, "--paths", help="Overlay level lines: red, blue or green"
    ),
    exact: list[int] | None = typer.Option(
        None, "--exact", help="Compare with the exact law after this many steps"
    ),
    config_path: Path | None = config_option(),
    as_json: bool = typer.Option(False, "--json", help="Machine-readable output"),
    verbose: bool = verbose_option(),
) -> None:
    """Sample a tiling with the flip chain."""
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        config = load_config(config_path)
        spec = resolve_spec(spec_path, n, m, cuts, a, repository)
        request = SamplingRequest(
            spec=spec,
            chain=ChainConfig(steps=steps, burn_in=burn_in, seed=seed),
            svg_path=svg_path,
            stats_path=stats_path,
            style=RenderStyle(draw_paths=_parse_paths(paths)),
            exact_lengths=exact or [],
            tiling_path=tiling_path,
        )
        with Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            console=console,
            transient=True,
            disable=as_json,
        ) as progress:
            task = progress.add_task("Running flip chain...", total=None)
            result = SamplingUseCase(repository, config).execute(request)
            progress.update(task, description="Chain finished!")
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e

    if as_json:
        typer.echo(to_json(result))
    else:
        _display_sample(result)
    if any(not c.passed for c in result.comparisons) or not result.profile_matches:
        raise typer.Exit(1)


def _display_sample(result: SamplingResult) -> None:
    spec = result.spec
    console.print(
        f"\n[bold blue]Sampled[/bold blue] ({spec.n}, {spec.m}, {spec.M}) at a={spec.a}: "
        f"{result.steps} steps after a burn-in of {result.burn_in}, seed {result.seed}"
    )
    console.print(f"  Acceptance rate: {format_number(result.acceptance_rate)}")
    console.print(f"  Vertical fraction: {format_number(result.vertical_fraction)}")
    console.print(f"  Orientation counts: {result.orientation_counts}")
    mark = "[green]✓[/green]" if result.profile_matches else "[red]✗[/red]"
    console.print(f"  {mark} Red-dot profile matches the boundary heights")
    if result.comparisons:
        table = Table(title="Chain against exact law")
        for column in ("steps", "visits", "TV", "chi-square", "dof", "p-value"):
            table.add_column(column, justify="right")
        for c in result.comparisons:
            table.add_row(
                str(c.steps),
                str(c.visits),
                format_number(c.total_variation),
                format_number(c.chi_square),
                str(c.dof),
                format_number(c.p_value),
            )
        console.print(table)
    for label, path in (
        ("SVG", result.svg_path),
        ("Stats", result.stats_path),
        ("Tiling", result.tiling_path),
    ):
        if path:
            console.print(f"[green]✓[/green] {label} written to {path}")


@app.command()
def render(
    tiling_path: Path | None = typer.Option(
        None, "--tiling", help="Tiling JSON written by `sample --tiling`"
    ),
    n: int | None = typer.Option(None, "--n", help="Width n (renders the initial tiling)"),
    m: int | None = typer.Option(None, "--m", help="Length m"),
    cuts: int | None = typer.Option(None, "--M", help="Number of cut cells M"),
    spec_path: Path | None = spec_option(),
    output_file: Path = typer.Option(..., "--out", "-o", help="SVG output file"),
    cell_px: int = typer.Option(8, "--cell-px", help="Pixels per cell"),
    paths: list[str] | None = typer.Option(
        None, "--paths", help="Overlay level lines: red, blue or green"
    ),
    verbose: bool = verbose_option(),
) -> None:
    """Render a stored tiling, or the initial tiling of a domain, as SVG."""
    setup_logging(verbose)
    repository = ResultsRepository()
    try:
        if tiling_path is not None:
            tiling = repository.load_tiling(tiling_path)
        else:
            tiling = initial_tiling(resolve_spec(spec_path, n, m, cuts, None, repository))
        style = RenderStyle(cell_px=cell_px, draw_paths=_parse_paths(paths))
        repository.write_text(render_svg(tiling, style), output_file)
    except (SkewAztecError, ValidationError) as e:
        console.print(f"[red]✗[/red] Error: {e}")
        raise typer.Exit(1) from e
    console.print(f"[green]✓[/green] {len(tiling.dominoes)} dominoes rendered to {output_file}")


def main() -> None:
    """Main entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
