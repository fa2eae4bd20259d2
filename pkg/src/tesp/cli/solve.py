"""Contains `tesp solve` CLI implementation."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from tesp.bench import ExperimentSpec, gen_random_equation
from tesp.bench.experiment import run_method
from tesp.utils import io, vis

from .options import common_options, parse_dims, reports_errors, setup_logging, stopping_options

LOGGER = logging.getLogger(__name__)


@click.command()
@click.option(
    "--dims",
    callback=parse_dims,
    default="20,10,10,20,4",
    show_default=True,
    help="Sizes m,r,s,n,l of a random consistent equation.",
)
@click.option("--method", default="NTERK-both", show_default=True, help="Method name.")
@stopping_options
@click.option(
    "--out",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="CSV file for the per-iteration trace.",
)
@click.option(
    "--plot",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="PNG file for the RRN curve.",
)
@common_options
@reports_errors
def solve_cli(
    dims: tuple[int, int, int, int, int],
    method: str,
    seed: int,
    tol: float,
    max_iters: int,
    max_seconds: float,
    theta: float,
    semidefinite: bool,
    out: Path | None,
    plot: Path | None,
    verbose: bool,
    log_path: Path | None,
):
    """Solve one random equation with one method."""
    setup_logging(verbose, log_path)
    spec = ExperimentSpec(
        dims=dims,
        methods=(method,),
        trials=1,
        seed=seed,
        rrn_tol=tol,
        max_iters=max_iters,
        max_seconds=max_seconds,
        theta=theta,
        semidefinite=semidefinite,
    )
    spec.validate()
    problem = gen_random_equation(*dims, seed=seed)
    _, trace = run_method(problem, method, spec, seed)

    click.echo(
        f"{trace.method}: {trace.status} after {trace.num_iterations} iterations, "
        f"RRN {trace.final_rrn:.3e}, {trace.elapsed_s:.3f} s "
        f"(+{trace.precompute_s:.3f} s precomputation)."
    )
    if out is not None:
        io.write_csv(trace.to_rows(), out)
        LOGGER.info("Wrote trace to %s.", out)
    if plot is not None:
        vis.plot_rrn({trace.method: trace.rrn_history()}, plot)
        LOGGER.info("Wrote RRN plot to %s.", plot)
