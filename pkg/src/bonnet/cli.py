"""
CLI entry point for bonnet: verify integral identities, calibrate
Gauss-Bonnet constants and scan pointwise residuals on catalog shapes.
"""

import typer # for CLI
from pathlib import Path # for file paths
from typing import List, Optional # for type hints
from pendulum import now # for run timing
from rich.console import Console
from rich.progress import Progress # for progress bars
from rich.panel import Panel # for panels
from rich.table import Table # for result tables

# local imports
from .config import (RunConfig, collect_shape_params, default_identities, load_constants,
                     resolve_direction) # for run configuration
from .errors import BonnetError, ConfigurationError, ContractViolation # for exit codes
from .identities import (IDENTITY_DESCRIPTIONS, IdentityChecker, IdentityId,
                         calibrate_gb_constants) # for the checks
from .scanner import PointwiseScanner # for pointwise scans
from .shapes import CATALOG, SHAPE_ALIASES, make_shape # for the shape catalog
from .writer import ReportWriter, write_constants # for report files
from .utils import elapsed_since, parse_float_list, parse_int_list, setup_logging # for logging and parsing

EXIT_FAILED = 1
EXIT_USAGE = 2

app = typer.Typer(
    name="bonnet",
    help="Numerical checks of integral identities for closed hypersurfaces in space forms",
    add_completion=False,
)
console = Console()


def _usage_error(e: Exception):
    console.print(f"[bold red]Usage error: {e}[/bold red]")
    raise typer.Exit(EXIT_USAGE)


def _report_table(title: str, records: list) -> Table:
    table = Table(title=title)
    table.add_column("identity")
    table.add_column("m", justify="right")
    table.add_column("lhs", justify="right")
    table.add_column("rhs", justify="right")
    table.add_column("rel err", justify="right")
    table.add_column("result")
    for report in records:
        table.add_row(
            report.identity_id,
            "" if report.m is None else str(report.m),
            f"{report.lhs:.10g}",
            f"{report.rhs:.10g}",
            f"{report.rel_err:.2e}",
            "[green]pass[/green]" if report.passed else "[red]FAIL[/red]",
        )
    return table


@app.command()
def verify(
    shape: str = typer.Option(..., "--shape", "-s", help="Catalog shape (see 'bonnet list')"),
    n: Optional[int] = typer.Option(None, "--n", help="Hypersurface dimension"),
    k: Optional[float] = typer.Option(None, "--k", help="Curvature of the space form"),
    rho: Optional[float] = typer.Option(None, "--rho", help="Radius (spheres)"),
    major_radius: Optional[float] = typer.Option(None, "--R", help="Major radius (torus of revolution)"),
    minor_radius: Optional[float] = typer.Option(None, "--r", help="Minor or tube radius"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Radius angle (tori in spheres)"),
    semi_axes: Optional[str] = typer.Option(None, "--semi-axes", help="Comma-separated semi-axes (ellipsoids)"),
    orientation: Optional[int] = typer.Option(None, "--orientation", help="+1 outward, -1 inward normal"),
    identity: Optional[List[str]] = typer.Option(None, "--identity", "-i",
                                                 help="Identity to check (repeatable; default: all that apply)"),
    a: Optional[str] = typer.Option(None, "--a", help="Direction 'x0,x1,...' or 'random-seed:<int>'"),
    timelike: bool = typer.Option(False, "--timelike", help="Draw or accept timelike directions (k < 0)"),
    m: Optional[str] = typer.Option(None, "--m", help="Comma-separated moment orders"),
    nodes: Optional[int] = typer.Option(None, "--nodes", help="Quadrature nodes per axis"),
    tol: float = typer.Option(1e-6, "--tol", help="Relative tolerance"),
    constants: Optional[Path] = typer.Option(None, "--constants", "-c", help="Gauss-Bonnet constants file"),
    output: Path = typer.Option(Path("bonnet-verify.json"), "--output", "-o", help="Report file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Check integral identities on one shape and write a report."""
    setup_logging(verbose)
    start = now()

    try:
        params = collect_shape_params(
            shape, n=n, k=k, rho=rho, R=major_radius, r=minor_radius, alpha=alpha,
            semi_axes=parse_float_list(semi_axes), orientation=orientation,
        )
        config = RunConfig(
            command="verify", shape=shape, shape_params=params, identities=list(identity or []),
            a=a, timelike=timelike, m=parse_int_list(m), nodes=nodes, tol=tol, output=output,
            constants=constants,
        )
        config.validate()
        gb_constants = load_constants(constants)
        surface = make_shape(shape, params)
        direction, _ = resolve_direction(a, surface.form.signature, timelike)
        if not config.identities:
            config.identities = default_identities(surface.n, surface.k, gb_constants is not None)
        checker = IdentityChecker(surface, nodes, tol_rel=tol, constants=gb_constants, allow_timelike=timelike)
    except (ContractViolation, ConfigurationError) as e:
        _usage_error(e)

    console.print(Panel(f"{surface.describe()}\nidentities: {', '.join(config.identities)}",
                        title="bonnet verify"))
    jobs = [(IdentityId(name), m_value) for name in config.identities
            for m_value in config.m_values(IdentityId(name))]
    if not jobs:
        _usage_error(ContractViolation(f"No identity in {config.identities} takes m = {config.m}"))
    reports = []
    failure = None
    try:
        with Progress(console=console, transient=True) as progress:
            task = progress.add_task("[cyan]Checking identities...[/cyan]", total=len(jobs))
            for identity_id, m_value in jobs:
                reports.append(checker.run(identity_id, direction, m_value))
                progress.advance(task)
    except (ContractViolation, ConfigurationError) as e:
        _usage_error(e)
    except BonnetError as e:
        failure = e

    writer = ReportWriter(output)
    writer.write("verify", config.to_dict(), reports)
    if reports:
        console.print(_report_table(surface.describe(), reports))
    console.print(f"Report written to {output} in {elapsed_since(start)}")

    if failure is not None:
        console.print(f"[bold red]Error: {failure}[/bold red]")
        raise typer.Exit(EXIT_FAILED)
    failed = [report for report in reports if not report.passed]
    if failed:
        console.print(f"[bold red]{len(failed)} of {len(reports)} checks failed[/bold red]")
        raise typer.Exit(EXIT_FAILED)
    console.print(f"[bold green]All {len(reports)} checks passed[/bold green]")


@app.command()
def calibrate(
    n: int = typer.Option(..., "--n", help="Even hypersurface dimension"),
    k: float = typer.Option(..., "--k", help="Nonzero curvature of the fitting space form"),
    radii: Optional[str] = typer.Option(None, "--radii", help="Comma-separated geodesic-sphere radii"),
    nodes: Optional[int] = typer.Option(None, "--nodes", help="Quadrature nodes per axis"),
    tol: float = typer.Option(1e-3, "--tol", help="Relative tolerance of the validation checks"),
    output: Path = typer.Option(Path("gb-constants.json"), "--output", "-o", help="Constants file"),
    report: Optional[Path] = typer.Option(None, "--report", help="Calibration report file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Fit the Gauss-Bonnet constants on geodesic spheres and write a constants file."""
    setup_logging(verbose)
    start = now()

    try:
        config = RunConfig(command="calibrate", n=n, k=k, radii=parse_float_list(radii), nodes=nodes, tol=tol,
                           output=output)
        config.validate()
        with console.status(f"[bold green]Calibrating n={n} constants in k={k:g}...[/bold green]"):
            result = calibrate_gb_constants(n, k, config.radii, nodes_per_axis=nodes, validation_tol=tol)
    except (ContractViolation, ConfigurationError) as e:
        _usage_error(e)
    except BonnetError as e:
        console.print(f"[bold red]Error: {e}[/bold red]")
        raise typer.Exit(EXIT_FAILED)

    write_constants(result.to_constants(), output,
                    extra={"k": k, "fit_radii": result.fit_radii, "condition": result.condition})
    if report is not None:
        ReportWriter(report).write("calibrate", config.to_dict(), [result])

    table = Table(title=f"Gauss-Bonnet constants, n = {n}")
    table.add_column("i", justify="right")
    table.add_column("c_i", justify="right")
    for i, value in enumerate(result.c, start=1):
        table.add_row(str(i), f"{value:.12g}")
    console.print(table)
    console.print(_report_table("Validation", result.validation))
    console.print(f"Constants written to {output} in {elapsed_since(start)}")

    if not result.passed:
        console.print("[bold red]Fitted constants failed validation[/bold red]")
        raise typer.Exit(EXIT_FAILED)


@app.command()
def scan(
    shape: Optional[List[str]] = typer.Option(None, "--shape", "-s",
                                              help="Catalog shape (repeatable; default: whole catalog)"),
    samples: int = typer.Option(200, "--samples", help="Random points per chart"),
    seed: int = typer.Option(0, "--seed", help="Seed of the point generator"),
    threshold: Optional[float] = typer.Option(None, "--threshold", help="Residual threshold"),
    output: Path = typer.Option(Path("bonnet-scan.json"), "--output", "-o", help="Report file"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
):
    """Report the worst pointwise residuals at random points of catalog shapes."""
    setup_logging(verbose)
    start = now()
    names = list(shape or CATALOG)

    try:
        for name in names:
            RunConfig(command="scan", shape=name, samples=samples, seed=seed).validate()
        config = RunConfig(command="scan", identities=[], samples=samples, seed=seed, output=output)
        scanner = PointwiseScanner(samples=samples, seed=seed, threshold=threshold)
        shapes = [make_shape(name) for name in names]
    except (ContractViolation, ConfigurationError) as e:
        _usage_error(e)

    results = []
    failure = None
    try:
        with Progress(console=console, transient=True) as progress:
            task = progress.add_task("[cyan]Scanning shapes...[/cyan]", total=len(shapes))
            for surface in shapes:
                results.append(scanner.scan(surface))
                progress.advance(task)
    except BonnetError as e:
        failure = e

    record = config.to_dict()
    record["shapes"] = names
    ReportWriter(output).write("scan", record, results)

    table = Table(title="Pointwise residuals")
    table.add_column("shape")
    table.add_column("worst check")
    table.add_column("worst", justify="right")
    table.add_column("threshold", justify="right")
    table.add_column("result")
    for result in results:
        worst_check = max(result.residuals, key=result.residuals.get) if result.residuals else ""
        table.add_row(result.shape, worst_check, f"{result.worst:.2e}", f"{result.threshold:.0e}",
                      "[green]pass[/green]" if result.passed else "[red]FAIL[/red]")
    console.print(table)
    console.print(f"Report written to {output} in {elapsed_since(start)}")

    if failure is not None:
        console.print(f"[bold red]Error: {failure}[/bold red]")
        raise typer.Exit(EXIT_FAILED)
    if not all(result.passed for result in results):
        raise typer.Exit(EXIT_FAILED)


@app.command(name="list")
def list_catalog():
    """Show the available shapes and identities."""
    shapes = Table(title="Shapes")
    shapes.add_column("name")
    shapes.add_column("defaults")
    shapes.add_column("description")
    aliases = {target: alias for alias, target in SHAPE_ALIASES.items()}
    for name, entry in CATALOG.items():
        label = f"{name} ({aliases[name]})" if name in aliases else name
        defaults = ", ".join(f"{key}={value}" for key, value in entry.defaults.items())
        shapes.add_row(label, defaults, entry.description)
    console.print(shapes)

    identities = Table(title="Identities")
    identities.add_column("id")
    identities.add_column("statement")
    for identity_id, description in IDENTITY_DESCRIPTIONS.items():
        identities.add_row(identity_id.value, description)
    console.print(identities)


if __name__ == "__main__":
    app()
