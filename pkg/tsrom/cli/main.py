"""Main CLI module for tsrom."""

import functools
import logging
from typing import Optional

import click
from tabulate import tabulate

from tsrom import __version__
from tsrom.cli.pipeline import Pipeline
from tsrom.config.loader import load_config
from tsrom.errors import InvalidArgumentError, IoFailureError, TsromError
from tsrom.utils.helpers import setup_logging


def _configure_logging(level: str) -> None:
    logger = setup_logging("tsrom", level)
    for handler in logger.handlers:
        if isinstance(handler, logging.StreamHandler):
            handler.setStream(click.get_text_stream("stderr"))


def _pipeline(ctx: click.Context) -> Pipeline:
    options = ctx.obj
    config = load_config(
        options["config"],
        output_dir=options["out"],
        chunk_rows=options["chunk_rows"],
        interpolant_kind=options["interp"],
        n_candidates=options["candidates"],
        threads=options["threads"],
    )
    return Pipeline(config)


def reports_errors(command):
    """Print tsrom errors as 'ERROR <code>: <message>' and exit with status 1"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TsromError as e:
            click.echo(f"ERROR {e.code}: {e}", err=True)
            click.get_current_context().exit(1)
        except OSError as e:
            click.echo(f"ERROR {IoFailureError.code}: {e}", err=True)
            click.get_current_context().exit(1)
        except ValueError as e:
            click.echo(f"ERROR {InvalidArgumentError.code}: {e}", err=True)
            click.get_current_context().exit(1)

    return wrapper


@click.group()
@click.version_option(version=__version__)
@click.option(
    "--config", "config_path", type=click.Path(dir_okay=False), default=None, help="JSON or YAML config file"
)
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Output directory")
@click.option("--chunk-rows", type=int, default=None, help="Rows per matrix chunk")
@click.option("--interp", type=click.Choice(["linear", "pchip"]), default=None, help="Interpolant of V")
@click.option("--candidates", type=int, default=None, help="Number of candidate thresholds")
@click.option("--threads", type=int, default=None, help="Worker pool size")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    help="Logging level (logs go to stderr)",
)
@click.pass_context
def cli(ctx, config_path, out, chunk_rows, interp, candidates, threads, log_level):
    """tsrom - out-of-core SVD reduced-order models for parameterized simulations"""
    _configure_logging(log_level)
    ctx.obj = {
        "config": config_path,
        "out": out,
        "chunk_rows": chunk_rows,
        "interp": interp,
        "candidates": candidates,
        "threads": threads,
    }


@cli.command()
@click.pass_context
@reports_errors
def toygen(ctx):
    """Generate training and testing column files"""
    training, testing = _pipeline(ctx).cmd_toygen()
    click.echo(f"Wrote {len(training)} training and {len(testing)} testing columns")


@cli.command("assemble")
@click.pass_context
@reports_errors
def assemble_cmd(ctx):
    """Assemble training columns into the snapshot matrix"""
    path = _pipeline(ctx).cmd_assemble()
    click.echo(f"Wrote matrix manifest {path}")


@cli.command()
@click.pass_context
@reports_errors
def decompose(ctx):
    """Compute the SVD of the snapshot matrix"""
    path = _pipeline(ctx).cmd_decompose()
    click.echo(f"Wrote factor manifest {path}")


@cli.command("calibrate")
@click.pass_context
@reports_errors
def calibrate_cmd(ctx):
    """Choose the variation threshold from the testing columns"""
    report = _pipeline(ctx).cmd_calibrate()
    click.echo(f"Chosen tau_bar: {report.chosen_tau_bar:.17g}")
    click.echo(
        tabulate(
            report.split_rows(),
            headers=["s", "tau_bar", "R", "error"],
            floatfmt=".6g",
        )
    )


@cli.command("predict")
@click.option("--s", "s_values", type=float, multiple=True, help="Parameter value (repeatable)")
@click.option("--tau-bar", type=float, default=None, help="Override the calibrated threshold")
@click.pass_context
@reports_errors
def predict_cmd(ctx, s_values, tau_bar: Optional[float]):
    """Predict mean and variance at parameter values (testing sites by default)"""
    pipeline = _pipeline(ctx)
    predictions = pipeline.cmd_predict(list(s_values), tau_bar=tau_bar)
    click.echo(f"Wrote {len(predictions)} predictions to {pipeline.prediction_dir}")


@cli.command()
@click.pass_context
@reports_errors
def validate(ctx):
    """Compare predictions with truth and the response-surface baseline"""
    path = _pipeline(ctx).cmd_validate()
    click.echo(f"Wrote {path}")


@cli.command()
@click.pass_context
@reports_errors
def run(ctx):
    """Run every stage from toygen to validate"""
    artifacts = _pipeline(ctx).run()
    for name, path in artifacts.items():
        click.echo(f"{name}: {path}")


@cli.command()
@click.pass_context
@reports_errors
def info(ctx):
    """Show singular values and model metadata of the stored factors"""
    rows, metadata = _pipeline(ctx).info()
    click.echo(tabulate(list(metadata.items()), tablefmt="plain"))
    click.echo()
    click.echo(tabulate(rows, headers=["k", "sigma", "sigma/sigma_1", "energy"], floatfmt=".6e"))


if __name__ == "__main__":
    cli()
