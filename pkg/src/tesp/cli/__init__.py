"""Command-line interface of tesp."""

import click

from . import analyze, bench, deblur, solve


@click.group()
def main_cli():
    """Randomized sketch-and-project solvers for A*X*B = C under the t-product."""
    pass


main_cli.add_command(solve.solve_cli, "solve")
main_cli.add_command(bench.bench_cli, "bench")
main_cli.add_command(deblur.deblur_cli, "deblur")
main_cli.add_command(analyze.analyze_cli, "analyze")
