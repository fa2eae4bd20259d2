"""Contains `tesp analyze` CLI implementation."""

from __future__ import annotations

import logging
from pathlib import Path

import click

from tesp.analysis import expected_projector_spectrum, special_case_rho
from tesp.bench import gen_random_equation
from tesp.sketch import build_preset, preset_names
from tesp.utils import io

from .options import common_options, parse_dims, reports_errors, setup_logging

LOGGER = logging.getLogger(__name__)


@click.command()
@click.option(
    "--dims",
    callback=parse_dims,
    default="6,3,3,6,3",
    show_default=True,
    help="Sizes m,r,s,n,l of a random consistent equation.",
)
@click.option(
    "--method",
    "preset",
    type=click.Choice(preset_names()),
    default="TERK-both",
    show_default=True,
    help="Special-case preset whose sketch sets are analyzed.",
)
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the equation.")
@click.option(
    "--theta", type=float, default=0.5, show_default=True, help="Parameter of the capped rule."
)
@click.option(
    "--out",
    type=click.Path(path_type=Path, dir_okay=False),
    default=None,
    help="JSON-lines file for the report.",
)
@common_options
@reports_errors
def analyze_cli(
    dims: tuple[int, int, int, int, int],
    preset: str,
    seed: int,
    theta: float,
    out: Path | None,
    verbose: bool,
    log_path: Path | None,
):
    """Convergence factors of a preset on a random equation."""
    setup_logging(verbose, log_path)
    problem = gen_random_equation(*dims, seed=seed)
    sketches = build_preset(preset, problem.A, problem.B)
    report = expected_projector_spectrum(
        problem, sketches.left_set, sketches.right_set, sketches.weights, theta=theta
    )
    closed_form = special_case_rho(preset, problem.A, problem.B)

    summary = {
        "preset": preset,
        "dims": list(dims),
        "seed": seed,
        "rho_ntesp": report.rho,
        "rho_fourier": report.rho_fourier,
        "rho_closed_form": closed_form,
        "rho_md": report.rho_md,
        "rho_cs": report.rho_cs,
        "theta": report.theta,
        "delta_p_sq": report.delta_p_sq,
        "delta_inf_sq": report.delta_inf_sq,
        "delta_inf_upper": report.delta_inf_upper,
        "delta_uniform_sq": report.delta_uniform_sq,
        "approximate": report.approximate,
    }
    for key, value in summary.items():
        click.echo(f"{key}: {value}")
    if out is not None:
        io.write_jsonl([summary], out)
        LOGGER.info("Wrote report to %s.", out)
