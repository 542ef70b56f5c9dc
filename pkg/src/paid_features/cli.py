"""Command-line interface for paid-features simulations."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich import box
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.table import Table

from .concentration import mc_loss_uniform, mc_matrix_concentration
from .core.config import get_settings
from .core.errors import EpisodeError, PaidFeaturesError, RateFitError
from .core.logging_config import set_logger, setup_logging
from .environment import load_instance
from .harness import run_episode, run_lower_bound, sweep
from .models import (
    ExperimentConfig,
    Instance,
    PolicyOverrides,
    PolicyVariant,
    RunLog,
    ViolationReport,
)
from .oracle import instance_checks, loss_landscape
from .policies import make_policy_config
from .reporting import ReportGenerator, Result

app = typer.Typer(help="Paid Features - online regression with noise-reducible features")
console = Console()

EXIT_RUNTIME = 1
EXIT_USAGE = 2

DEFAULT_LOSS_INSTANCE = "builtin:fratio-2d"


def _fail(message: str, code: int = EXIT_USAGE) -> typer.Exit:
    console.print(f"[red]✗[/red] {escape(message)}")
    return typer.Exit(code)


@app.callback()
def main_callback(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Timestamped log lines"),
) -> None:
    """Configure logging for every command."""
    level = log_level or get_settings().log_level
    set_logger(setup_logging(level=level, verbose=verbose))


def _load_config(path: Optional[Path]) -> Optional[ExperimentConfig]:
    if path is None:
        return None
    if not path.is_file():
        raise _fail(f"Config file not found: {path}")
    try:
        return ExperimentConfig.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        raise _fail(f"Invalid config {path}: {e}") from None


def _resolve_instance(source: Optional[str], config: Optional[ExperimentConfig]) -> Instance:
    ref: Instance | str | None = source
    if ref is None and config is not None:
        ref = config.instance
    if ref is None:
        raise _fail("No instance given: pass --instance or --config")
    if isinstance(ref, Instance):
        return ref
    try:
        return load_instance(ref)
    except FileNotFoundError:
        raise _fail(f"Instance file not found: {ref}") from None
    except KeyError as e:
        raise _fail(str(e.args[0])) from None
    except ValidationError as e:
        raise _fail(f"Invalid instance {ref}: {e}") from None


def _overrides(
    config: Optional[ExperimentConfig],
    K: Optional[int],
    delta: Optional[float],
    regularization_scale: Optional[float],
    bonus_scale: Optional[float],
    no_regularization: bool,
    include_zero_arm: bool,
) -> PolicyOverrides:
    base = config.overrides if config is not None else PolicyOverrides()
    update: dict[str, object] = {}
    if K is not None:
        update["K"] = K
    if delta is not None:
        update["delta"] = delta
    if regularization_scale is not None:
        update["regularization_scale"] = regularization_scale
    if bonus_scale is not None:
        update["bonus_scale"] = bonus_scale
    if no_regularization:
        update["regularized"] = False
    if include_zero_arm:
        update["include_zero_arm"] = True
    try:
        return PolicyOverrides.model_validate({**base.model_dump(), **update})
    except ValidationError as e:
        raise _fail(f"Invalid policy overrides: {e}") from None


def _output_dir(flag: Optional[Path], config: Optional[ExperimentConfig]) -> Path:
    if flag is not None:
        return flag
    if config is not None and config.output_dir is not None:
        return config.output_dir
    return get_settings().output_dir


def _write(result: Result, stem: Path, formats: list[str]) -> list[Path]:
    generator = ReportGenerator(result)
    written = []
    for fmt in formats:
        suffix = {"csv": ".csv", "json": ".json", "md": ".md"}[fmt]
        written.append(generator.save(stem.with_suffix(suffix)))
    return written


def _check_formats(formats: list[str]) -> list[str]:
    unknown = [f for f in formats if f not in ("csv", "json", "md")]
    if unknown:
        raise _fail(f"Unknown format(s): {', '.join(unknown)}")
    return formats


def display_run(log: RunLog) -> None:
    """Display an episode summary."""
    s = log.summary
    console.print(
        Panel(
            f"[bold]Instance:[/bold] {log.instance_name}\n"
            f"[bold]Policy:[/bold] {log.config.describe()}\n"
            f"[bold]Rounds:[/bold] {s.rounds}\n"
            f"[bold]Regret:[/bold] {s.regret:.6g} ({s.regret_per_round:.4g} per round)\n"
            f"[bold]Payment / prediction:[/bold] {s.payment_regret:.6g} / {s.prediction_regret:.6g}\n"
            f"[bold]Optimal loss:[/bold] {s.optimal_loss:.8g} ± {s.slack:.2g}",
            title="Episode Summary",
            box=box.ROUNDED,
        )
    )


@app.command()
def run(
    instance: Optional[str] = typer.Option(
        None, "--instance", "-i", help="Instance JSON file or builtin:<name>"
    ),
    policy: Optional[str] = typer.Option(None, "--policy", "-p", help="known or unknown"),
    T: Optional[int] = typer.Option(None, "--T", help="Horizon"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Episode seed"),
    config_path: Optional[Path] = typer.Option(None, "--config", help="Experiment config JSON"),
    K: Optional[int] = typer.Option(None, "--K", help="Override the grid size"),
    delta: Optional[float] = typer.Option(None, "--delta", help="Override the confidence level"),
    regularization_scale: Optional[float] = typer.Option(None, "--regularization-scale"),
    bonus_scale: Optional[float] = typer.Option(None, "--bonus-scale"),
    no_regularization: bool = typer.Option(False, "--no-regularization"),
    include_zero_arm: bool = typer.Option(False, "--include-zero-arm"),
    diagnostics: bool = typer.Option(False, "--diagnostics", help="Record per-arm objectives"),
    oracle_grid: Optional[int] = typer.Option(None, "--oracle-grid", help="Scoring grid size M"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o"),
    formats: Optional[list[str]] = typer.Option(None, "--format", "-f", help="csv, json or md"),
) -> None:
    """Run a single episode and write its run log."""
    config = _load_config(config_path)
    inst = _resolve_instance(instance, config)
    variant = policy or (config.policy if config else "known")
    if variant not in ("known", "unknown"):
        raise _fail(f"Unknown policy '{variant}': use known or unknown")
    horizon = T if T is not None else (config.horizons[-1] if config else 1024)
    episode_seed = seed if seed is not None else (config.seeds[0] if config else 0)
    overrides = _overrides(
        config, K, delta, regularization_scale, bonus_scale, no_regularization, include_zero_arm
    )
    grid = oracle_grid or (config.oracle_grid if config else get_settings().oracle_grid)
    fmts = _check_formats(formats or (list(config.formats) if config else ["csv", "json"]))
    if horizon < 0:
        raise _fail("--T must be nonnegative")

    policy_config = make_policy_config(
        _variant(variant), inst, max(horizon, 1), overrides, record_diagnostics=diagnostics
    )
    stem = _output_dir(output_dir, config) / f"runlog_{inst.name}_{variant}_T{horizon}_seed{episode_seed}"
    try:
        log = run_episode(inst, policy_config, horizon, episode_seed, landscape=loss_landscape(inst, grid))
    except EpisodeError as e:
        _write(e.partial_log, stem, fmts)
        raise _fail(f"Episode failed: {e}", EXIT_RUNTIME) from None
    except PaidFeaturesError as e:
        raise _fail(f"Episode failed: {e}", EXIT_RUNTIME) from None

    display_run(log)
    for path in _write(log, stem, fmts):
        console.print(f"[green]✓[/green] Wrote {path}")


def _variant(name: str) -> PolicyVariant:
    return "known" if name == "known" else "unknown"


def _parse_horizons(values: Optional[list[str]]) -> Optional[list[int]]:
    if not values:
        return None
    out: list[int] = []
    for value in values:
        for part in value.split(","):
            part = part.strip()
            if part:
                out.append(int(part))
    return out


@app.command("sweep")
def sweep_cmd(
    instances: Optional[list[str]] = typer.Option(
        None, "--instance", "-i", help="Instance file or builtin:<name> (repeatable)"
    ),
    policy: Optional[str] = typer.Option(None, "--policy", "-p", help="known or unknown"),
    horizons: Optional[list[str]] = typer.Option(
        None, "--horizons", "-T", help="Comma-separated horizons (repeatable)"
    ),
    seeds: Optional[int] = typer.Option(None, "--seeds", help="Number of seeds"),
    seed_start: int = typer.Option(0, "--seed-start", help="First seed"),
    config_path: Optional[Path] = typer.Option(None, "--config", help="Experiment config JSON"),
    K: Optional[int] = typer.Option(None, "--K"),
    delta: Optional[float] = typer.Option(None, "--delta"),
    regularization_scale: Optional[float] = typer.Option(None, "--regularization-scale"),
    bonus_scale: Optional[float] = typer.Option(None, "--bonus-scale"),
    no_regularization: bool = typer.Option(False, "--no-regularization"),
    include_zero_arm: bool = typer.Option(False, "--include-zero-arm"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w"),
    oracle_grid: Optional[int] = typer.Option(None, "--oracle-grid"),
    fit: bool = typer.Option(False, "--fit", help="Fit the log-log regret slope"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o"),
    formats: Optional[list[str]] = typer.Option(None, "--format", "-f"),
) -> None:
    """Run episodes over horizons and seeds and aggregate regret."""
    settings = get_settings()
    config = _load_config(config_path)
    if instances:
        insts = [_resolve_instance(source, None) for source in instances]
    else:
        insts = [_resolve_instance(None, config)]
    variant = policy or (config.policy if config else "known")
    if variant not in ("known", "unknown"):
        raise _fail(f"Unknown policy '{variant}': use known or unknown")
    try:
        grid_T = _parse_horizons(horizons)
    except ValueError:
        raise _fail("Horizons must be integers") from None
    grid_T = grid_T or (config.horizons if config else settings.default_horizons)
    if any(h < 1 for h in grid_T):
        raise _fail("Horizons must be positive")
    if fit and len(set(grid_T)) < 3:
        raise _fail("rate fit requires ≥ 3 horizons")
    if seeds is not None:
        seed_list = list(range(seed_start, seed_start + seeds))
    elif config is not None:
        seed_list = config.seeds
    else:
        seed_list = list(range(seed_start, seed_start + settings.default_seeds))
    if not seed_list:
        raise _fail("At least one seed is required")
    overrides = _overrides(
        config, K, delta, regularization_scale, bonus_scale, no_regularization, include_zero_arm
    )
    fmts = _check_formats(formats or (list(config.formats) if config else ["csv", "json"]))

    try:
        result = sweep(
            insts,
            _variant(variant),
            sorted(grid_T),
            seed_list,
            overrides=overrides,
            workers=workers or (config.workers if config else None),
            oracle_grid=oracle_grid or (config.oracle_grid if config else None),
            fit=fit,
        )
    except RateFitError as e:
        raise _fail(str(e), EXIT_RUNTIME) from None
    except PaidFeaturesError as e:
        raise _fail(f"Sweep failed: {e}", EXIT_RUNTIME) from None

    table = Table(title=f"Regret sweep ({variant})", box=box.SIMPLE)
    table.add_column("Instance", style="cyan")
    table.add_column("T", style="magenta")
    table.add_column("Mean regret", style="green")
    table.add_column("Std. error")
    table.add_column("Seeds")
    for row in result.rows:
        table.add_row(row.instance_name, str(row.horizon), f"{row.mean:.6g}", f"{row.stderr:.3g}", str(row.n_seeds))
    console.print(table)
    if result.fit is not None:
        console.print(f"[bold]Slope:[/bold] {result.fit.slope:.3f} ± {result.fit.stderr:.3f}")
    if result.failures:
        console.print(f"[yellow]⚠[/yellow] {len(result.failures)} episode(s) failed")

    names = "+".join(inst.name for inst in insts)
    stem = _output_dir(output_dir, config) / f"sweep_{names}_{variant}"
    for path in _write(result, stem, fmts):
        console.print(f"[green]✓[/green] Wrote {path}")


@app.command()
def validate(
    instance: str = typer.Argument(..., help="Instance JSON file or builtin:<name>"),
    grid: int = typer.Option(512, "--grid", help="Validation grid size"),
) -> None:
    """Check an instance's contract, profile regularity and oracle properties."""
    try:
        inst = load_instance(instance, check_contract=False)
    except FileNotFoundError:
        raise _fail(f"Instance file not found: {instance}") from None
    except KeyError as e:
        raise _fail(str(e.args[0])) from None
    except ValidationError as e:
        raise _fail(f"Invalid instance {instance}: {e}") from None

    results = instance_checks(inst, grid_size=grid)
    table = Table(title=f"Validation: {inst.name}", box=box.SIMPLE)
    table.add_column("Check", style="cyan")
    table.add_column("Result", style="bold")
    table.add_column("Detail")
    for check in results:
        status = "[green]PASS[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, status, check.detail)
    console.print(table)
    if not all(check.passed for check in results):
        raise typer.Exit(EXIT_RUNTIME)


def _report_table(report: ViolationReport) -> Table:
    table = Table(title=f"Concentration ({report.kind})", box=box.SIMPLE)
    table.add_column("t", style="magenta")
    table.add_column("Violations", style="red")
    table.add_column("Median deviation")
    table.add_column("Width ratio", style="green")
    for i, t in enumerate(report.checkpoints):
        table.add_row(
            str(t),
            str(report.violations_per_checkpoint[i]),
            f"{report.median_deviation[i]:.4g}",
            f"{report.width_ratio[i]:.3g}",
        )
    return table


@app.command()
def concentration(
    which: str = typer.Option("both", "--which", help="matrix, loss or both"),
    d: int = typer.Option(1, "--d", help="Dimension of the matrix experiment"),
    R: float = typer.Option(1.0, "--R", help="Standard deviation of the matrix experiment"),
    S: float = typer.Option(0.0, "--S", help="Mean norm of the matrix experiment"),
    instance: str = typer.Option(DEFAULT_LOSS_INSTANCE, "--instance", "-i", help="Loss experiment instance"),
    t_max: Optional[int] = typer.Option(None, "--t-max"),
    delta: float = typer.Option(0.05, "--delta"),
    trials: Optional[int] = typer.Option(None, "--trials"),
    points: int = typer.Option(100, "--points"),
    K: int = typer.Option(8, "--K", help="Cost grid of the loss experiment"),
    seed: int = typer.Option(0, "--seed"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o"),
) -> None:
    """Monte-Carlo check of the matrix and loss concentration bounds."""
    settings = get_settings()
    if which not in ("matrix", "loss", "both"):
        raise _fail(f"--which must be matrix, loss or both, got '{which}'")
    if trials is not None and trials < settings.min_trials:
        console.print(
            f"[yellow]⚠[/yellow] {trials} trials is below minimum trials ({settings.min_trials})"
        )
        raise typer.Exit(EXIT_USAGE)
    if not 0.0 < delta < 1.0:
        raise _fail("--delta must lie in (0, 1)")
    if points < 10:
        raise _fail("--points must be at least 10")

    reports: list[ViolationReport] = []
    try:
        if which in ("matrix", "both"):
            reports.append(
                mc_matrix_concentration(d, R, t_max or 10_000, delta, trials or 1000, seed, S=S)
            )
        if which in ("loss", "both"):
            inst = _resolve_instance(instance, None)
            reports.append(mc_loss_uniform(inst, t_max or 2048, delta, trials or 200, points, seed, K=K))
    except ValueError as e:
        raise _fail(str(e)) from None

    out = output_dir or settings.output_dir
    ok = True
    for report in reports:
        console.print(_report_table(report))
        verdict = "[green]PASS[/green]" if report.within_nominal else "[red]FAIL[/red]"
        console.print(
            f"{verdict} any-t violation frequency {report.any_violation_frequency:.4f} "
            f"(nominal {report.nominal:.4g} + slack {report.slack:.4f})"
        )
        path = ReportGenerator(report).save(out / f"concentration_{report.kind}.json")
        console.print(f"[green]✓[/green] Wrote {path}")
        ok = ok and report.within_nominal
    if not ok:
        raise typer.Exit(EXIT_RUNTIME)


@app.command("lower-bound")
def lower_bound(
    suite: str = typer.Argument(..., help="known or unknown"),
    eps: float = typer.Option(0.3, "--eps", help="Variance gap of the known suite"),
    K: int = typer.Option(4, "--K", help="Number of perturbed instances in the unknown suite"),
    T: int = typer.Option(16384, "--T", help="Horizon"),
    seeds: int = typer.Option(20, "--seeds"),
    seed_start: int = typer.Option(0, "--seed-start"),
    oracle_grid: Optional[int] = typer.Option(None, "--oracle-grid"),
    output_dir: Optional[Path] = typer.Option(None, "--output-dir", "-o"),
) -> None:
    """Run a lower-bound suite and check where late plays settle."""
    if suite not in ("known", "unknown"):
        raise _fail(f"Suite must be known or unknown, got '{suite}'")
    if suite == "known" and not 0.0 < eps <= 0.5:
        raise _fail("ε must lie in (0, 1/2]")
    if K < 1 or T < 1 or seeds < 1:
        raise _fail("--K, --T and --seeds must be positive")

    try:
        report = run_lower_bound(
            "known" if suite == "known" else "unknown",
            T,
            list(range(seed_start, seed_start + seeds)),
            eps=eps,
            K_env=K,
            oracle_grid=oracle_grid,
        )
    except EpisodeError as e:
        raise _fail(f"Episode failed: {e}", EXIT_RUNTIME) from None
    except PaidFeaturesError as e:
        raise _fail(f"Lower-bound suite failed: {e}", EXIT_RUNTIME) from None

    table = Table(title=f"Lower-bound suite ({suite}, T={T})", box=box.SIMPLE)
    table.add_column("Instance", style="cyan")
    table.add_column("Target cost")
    table.add_column("Mean regret", style="green")
    table.add_column("Modal late costs")
    table.add_column("Matches", style="bold")
    for e in report.entries:
        target = (
            f"{e.target_low:.4g}"
            if e.target_high <= e.target_low
            else f"[{e.target_low:.4g}, {e.target_high:.4g})"
        )
        modal = ", ".join(f"{c:.4g}" for c in sorted(set(e.modal_costs)))
        table.add_row(e.instance_name, target, f"{e.mean_regret:.6g}", modal, f"{e.matches}/{e.seeds}")
    console.print(table)

    out = output_dir or get_settings().output_dir
    path = ReportGenerator(report).save(out / f"lower_bound_{suite}_T{T}.json")
    console.print(f"[green]✓[/green] Wrote {path}")


@app.command()
def landscape(
    instance: str = typer.Option(..., "--instance", "-i", help="Instance JSON file or builtin:<name>"),
    grid: Optional[int] = typer.Option(None, "--grid", "-M", help="Grid size M"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="CSV output path"),
) -> None:
    """Compute the optimal-loss landscape and write it as CSV."""
    inst = _resolve_instance(instance, None)
    M = grid or get_settings().oracle_grid
    if M < 2:
        raise _fail("--grid must be at least 2")
    try:
        result = loss_landscape(inst, M)
    except PaidFeaturesError as e:
        raise _fail(str(e), EXIT_RUNTIME) from None
    console.print(
        Panel(
            f"[bold]Optimal loss:[/bold] {result.optimal_loss:.8g} ± {result.slack:.2g}\n"
            f"[bold]Optimal cost:[/bold] {result.optimal_cost:.6g}",
            title=f"Landscape: {inst.name}",
            box=box.ROUNDED,
        )
    )
    path = output or get_settings().output_dir / f"landscape_{inst.name}.csv"
    ReportGenerator(result).save(path, format="csv")
    console.print(f"[green]✓[/green] Wrote {path}")


@app.command()
def version() -> None:
    """Show version information."""
    from . import __version__

    console.print(f"Paid Features v{__version__}")


def main() -> None:
    """Entry point."""
    app()


# Export app for poetry script
__all__ = ["app", "main"]
