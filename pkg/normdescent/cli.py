"""Command-line entry point: ``normdescent verify|train|orthogonalize-trace|norm-table``."""
import functools
import json
from pathlib import Path
from typing import Callable, List, Optional

import pandas as pd
import structlog
import typer
from pydantic import ValidationError

from normdescent.core.config import get_settings
from normdescent.core.exceptions import ConfigError, NormDescentError, exit_code_for
from normdescent.core.logging import configure_logging
from normdescent.schemas.experiment import ExperimentConfig, RunRecord
from normdescent.schemas.polynomial import POLYNOMIAL_PRESETS, Normalization, PolynomialSpec
from normdescent.services.io import atomic_write_text, frame_to_csv, read_matrix_csv, to_json_text
from normdescent.services.norm_table import norm_table, norm_table_frame, reference_frame
from normdescent.services.tracing import orthogonalize_trace, trace_frame
from normdescent.services.training import (
    format_validation_error,
    load_experiment_configs,
    run_experiment,
    run_many,
    with_seed,
)
from normdescent.services.verification import run_suite

logger = structlog.get_logger(__name__)

app = typer.Typer(
    name="normdescent",
    help="Steepest descent under layer-wise norms: property suites, training runs and tables.",
    no_args_is_help=True,
    add_completion=False,
)


def handle_errors(fn: Callable) -> Callable:
    """Map library errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except typer.Exit:
            raise
        except (NormDescentError, ValueError) as exc:
            message = exc.message if isinstance(exc, NormDescentError) else str(exc)
            logger.error("command_failed", command=fn.__name__, error=message)
            typer.echo(f"error: {message}", err=True)
            raise typer.Exit(code=exit_code_for(exc))

    return wrapper


def emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        typer.echo(text, nl=False)
    else:
        atomic_write_text(output, text)
        logger.info("output_written", path=str(output))


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override NORMDESCENT_LOG_LEVEL."),
    log_format: Optional[str] = typer.Option(None, "--log-format", help="console or json."),
):
    configure_logging(log_level, log_format)


@app.command()
@handle_errors
def verify(
    suite: str = typer.Argument("all", help="linalg, norms, steepest, optimizers, models or all."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed for every generator."),
    as_json: bool = typer.Option(False, "--json", help="Print the report as JSON."),
    output: Optional[Path] = typer.Option(None, "--output", help="Write the report here instead of stdout."),
):
    """Run a property suite; exit 0 only when every check passes."""
    report = run_suite(suite, get_settings().DEFAULT_SEED if seed is None else seed)
    if as_json:
        text = to_json_text(report)
    else:
        frame = pd.DataFrame(
            [r.model_dump(exclude={"detail"}) for r in report.results],
            columns=["suite", "name", "passed", "error", "tolerance"],
        )
        text = frame.to_string(index=False) + f"\n{report.total - report.failed}/{report.total} passed\n"
    emit(text, output)
    if not report.passed:
        raise typer.Exit(code=1)


def _assign_outputs(configs: List[ExperimentConfig], output: Optional[Path]) -> List[ExperimentConfig]:
    if output is None:
        return configs
    if len(configs) == 1:
        return [configs[0].model_copy(update={"output_path": str(output)})]
    # a list writes one CSV per experiment into the output directory
    return [c.model_copy(update={"output_path": str(output / f"{c.name}.csv")}) for c in configs]


def _summary(records: List[RunRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "name": r.name,
                "status": r.status.value,
                "steps": r.steps_completed,
                "final_loss": r.final_loss,
                "csv_path": r.csv_path,
            }
            for r in records
        ],
        columns=["name", "status", "steps", "final_loss", "csv_path"],
    )


@app.command()
@handle_errors
def train(
    config: Path = typer.Option(..., "--config", help="JSON experiment config (one object or a list)."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the seed of every experiment."),
    as_json: bool = typer.Option(False, "--json", help="Print the run summaries as JSON."),
    output: Optional[Path] = typer.Option(
        None, "--output", help="CSV path for one experiment, directory for a list."
    ),
):
    """Train from a config; writes a CSV of per-step rows and a JSON record per run."""
    configs = load_experiment_configs(config)
    if seed is not None:
        configs = [with_seed(c, seed) for c in configs]
    configs = _assign_outputs(configs, output)

    if len(configs) == 1:
        results = [run_experiment(configs[0])]
    else:
        results = run_many(configs)

    records = [r for r in results if isinstance(r, RunRecord)]
    if as_json:
        typer.echo(json.dumps([r.model_dump(mode="json", exclude={"rows", "config"}) for r in records], indent=2))
    elif records:
        typer.echo(_summary(records).to_string(index=False))

    failures = [r for r in results if isinstance(r, NormDescentError)]
    if failures:
        for exc in failures:
            typer.echo(f"error: {exc.message}", err=True)
        raise typer.Exit(code=exit_code_for(failures[0]))


def _polynomial(
    config: Optional[Path],
    preset: str,
    iterations: Optional[int],
    normalization: Normalization,
    coefficients: Optional[str],
) -> PolynomialSpec:
    try:
        if config is not None:
            return PolynomialSpec.model_validate_json(config.read_text(encoding="utf-8"))
        if coefficients is not None:
            values = tuple(float(c) for c in coefficients.split(","))
            spec = {"coefficients": values, "normalization": normalization}
            if iterations is not None:
                spec["iterations"] = iterations
            return PolynomialSpec(**spec)
        return PolynomialSpec.preset(preset, iterations, normalization)
    except FileNotFoundError as exc:
        raise ConfigError(f"polynomial config not found: {config}") from exc
    except ValidationError as exc:
        raise ConfigError(f"invalid polynomial: {format_validation_error(exc)}", errors=exc.errors()) from exc


@app.command("orthogonalize-trace")
@handle_errors
def orthogonalize_trace_command(
    matrix: Path = typer.Argument(..., help="CSV of matrix rows, no header."),
    config: Optional[Path] = typer.Option(None, "--config", help="JSON polynomial spec."),
    preset: str = typer.Option("cubic", "--preset", help=f"One of {', '.join(POLYNOMIAL_PRESETS)}."),
    iterations: Optional[int] = typer.Option(None, "--iterations", min=1),
    normalization: Normalization = typer.Option(Normalization.SPECTRAL, "--normalization"),
    coefficients: Optional[str] = typer.Option(None, "--coefficients", help="Comma-separated, e.g. 1.5,-0.5."),
    as_json: bool = typer.Option(False, "--json"),
    output: Optional[Path] = typer.Option(None, "--output"),
):
    """Distance of each Newton-Schulz iterate from the SVD polar factor."""
    spec = _polynomial(config, preset, iterations, normalization, coefficients)
    rows = orthogonalize_trace(read_matrix_csv(matrix), spec)
    if as_json:
        text = json.dumps([r.model_dump() for r in rows], indent=2) + "\n"
    else:
        text = frame_to_csv(trace_frame(rows))
    emit(text, output)


@app.command("norm-table")
@handle_errors
def norm_table_command(
    matrix: Path = typer.Argument(..., help="CSV of matrix rows, no header."),
    as_json: bool = typer.Option(False, "--json"),
    output: Optional[Path] = typer.Option(None, "--output"),
):
    """Every implemented norm and dual of a matrix, plus the steepest-descent reference table."""
    table = norm_table(read_matrix_csv(matrix))
    if as_json:
        text = to_json_text(table)
    else:
        text = (
            f"{table.rows} x {table.cols} matrix\n\n"
            + norm_table_frame(table).to_string(index=False, float_format=lambda v: f"{v:.17g}")
            + "\n\n"
            + reference_frame(table).to_string(index=False)
            + "\n"
        )
    emit(text, output)


if __name__ == "__main__":
    app()
