"""Contains `tesp bench` CLI implementation."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from tesp.bench import ExperimentSpec, run_experiment, write_results
from tesp.utils import vis

from .options import (
    common_options,
    parse_dims,
    reports_errors,
    setup_logging,
    split_methods,
    stopping_options,
)

LOGGER = logging.getLogger(__name__)


@click.command()
@click.option(
    "--dims",
    callback=parse_dims,
    default="30,10,10,30,4",
    show_default=True,
    help="Sizes m,r,s,n,l of the random consistent equations.",
)
@click.option(
    "--method",
    "methods",
    multiple=True,
    default=["NTERK-both"],
    show_default=True,
    help="Method names; repeat the flag or separate with commas.",
)
@click.option("--trials", type=int, default=10, show_default=True, help="Trials per method.")
@stopping_options
@click.option(
    "--out",
    type=click.Path(path_type=Path, dir_okay=False),
    required=True,
    help="JSON-lines file of result rows.",
)
@click.option(
    "--trace-dir",
    type=click.Path(path_type=Path, file_okay=False),
    default=None,
    help="Directory for per-trial CSV traces.",
)
@click.option(
    "--timing/--no-timing",
    default=True,
    help="Include CPU times; disable for byte-identical reruns.",
)
@click.option(
    "--plot",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="PNG file with the RRN curve of each method's first trial.",
)
@common_options
@reports_errors
def bench_cli(
    dims: tuple[int, int, int, int, int],
    methods: tuple[str, ...],
    trials: int,
    seed: int,
    tol: float,
    max_iters: int,
    max_seconds: float,
    theta: float,
    semidefinite: bool,
    out: Path,
    trace_dir: Path | None,
    timing: bool,
    plot: Path | None,
    verbose: bool,
    log_path: Path | None,
):
    """Average iterations, CPU time and final RRN over random equations."""
    setup_logging(verbose, log_path)
    spec = ExperimentSpec(
        dims=dims,
        methods=split_methods(methods),
        trials=trials,
        seed=seed,
        rrn_tol=tol,
        max_iters=max_iters,
        max_seconds=max_seconds,
        theta=theta,
        semidefinite=semidefinite,
        include_timing=timing,
        trace_dir=trace_dir,
    )
    result = run_experiment(spec)
    write_results(result, spec, out)

    for row in result.rows:
        click.echo(
            f"{row.method}: IT {row.mean_iterations:.1f}, CPU {row.mean_cpu_s:.4f} s, "
            f"RRN {row.mean_final_rrn:.3e}, {row.status_counts}"
        )
    if plot is not None:
        first_runs = {name: traces[0].rrn_history() for name, traces in result.traces.items()}
        vis.plot_rrn(first_runs, plot)
        LOGGER.info("Wrote RRN plot to %s.", plot)
