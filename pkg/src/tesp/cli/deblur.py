"""Contains `tesp deblur` CLI implementation."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from tesp.bench import ExperimentSpec, format_psnr, run_experiment, write_results
from tesp.bench.problems import DEFAULT_BANDWIDTH, DEFAULT_SIGMA
from tesp.utils import io, vis

from .options import (
    common_options,
    parse_size,
    reports_errors,
    setup_logging,
    split_methods,
    stopping_options,
)

LOGGER = logging.getLogger(__name__)


@click.command()
@click.option(
    "--image",
    type=click.Path(path_type=Path, exists=True, dir_okay=False),
    default=None,
    help="PNG or planar .npy (3 x h x w) image; a synthetic image is used if omitted.",
)
@click.option(
    "--size",
    callback=parse_size,
    default="32x24",
    show_default=True,
    help="HxW of the synthetic image.",
)
@click.option(
    "--observation-size",
    callback=parse_size,
    default=None,
    help="HxW of the blurred observation, at least the image size; defaults to the image size.",
)
@click.option("--sigma", type=float, default=DEFAULT_SIGMA, show_default=True, help="Blur width.")
@click.option(
    "--bandwidth",
    type=int,
    default=DEFAULT_BANDWIDTH,
    show_default=True,
    help="Largest |i - j| with a nonzero blur entry.",
)
@click.option(
    "--method",
    "methods",
    multiple=True,
    default=["TERK-left"],
    show_default=True,
    help="Method names; repeat the flag or separate with commas.",
)
@click.option("--trials", type=int, default=1, show_default=True, help="Trials per method.")
@stopping_options
@click.option(
    "--out",
    type=click.Path(path_type=Path, file_okay=False),
    required=True,
    help="Directory for restored images and results.jsonl.",
)
@click.option(
    "--plot",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="PNG file with the RRN curve of each method's first trial.",
)
@common_options
@reports_errors
def deblur_cli(
    image: Path | None,
    size: tuple[int, int],
    observation_size: tuple[int, int] | None,
    sigma: float,
    bandwidth: int,
    methods: tuple[str, ...],
    trials: int,
    seed: int,
    tol: float,
    max_iters: int,
    max_seconds: float,
    theta: float,
    semidefinite: bool,
    out: Path,
    plot: Path | None,
    verbose: bool,
    log_path: Path | None,
):
    """Restore a blurred color image and report PSNR."""
    setup_logging(verbose, log_path)
    spec = ExperimentSpec(
        methods=split_methods(methods),
        trials=trials,
        seed=seed,
        problem_kind="deblur",
        image_path=image,
        image_size=size,
        observation_size=observation_size,
        sigma=sigma,
        bandwidth=bandwidth,
        rrn_tol=tol,
        max_iters=max_iters,
        max_seconds=max_seconds,
        theta=theta,
        semidefinite=semidefinite,
    )
    result = run_experiment(spec)
    out.mkdir(parents=True, exist_ok=True)
    write_results(result, spec, out / "results.jsonl")

    assert result.psnr_blurred is not None
    click.echo(f"blurred: PSNR {format_psnr(result.psnr_blurred)}")
    for row in result.rows:
        assert row.psnr is not None
        click.echo(
            f"{row.method}: PSNR {format_psnr(row.psnr)}, IT {row.mean_iterations:.1f}, "
            f"{row.status_counts}"
        )
        io.save_image(result.restored[row.method], out / f"{row.method}.png")
    if plot is not None:
        first_runs = {name: traces[0].rrn_history() for name, traces in result.traces.items()}
        vis.plot_rrn(first_runs, plot)
