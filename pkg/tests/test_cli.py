"""Tests for the tesp command line."""

from __future__ import annotations

import logging
from typing import Iterator

import numpy as np
import pytest
from click.testing import CliRunner

from tesp.cli import main_cli
from tesp.utils import io


@pytest.fixture
def runner() -> Iterator[CliRunner]:
    yield CliRunner()
    # Handlers bound to the runner's captured stdout must not outlive it.
    for handler in list(logging.getLogger("tesp").handlers):
        logging.getLogger("tesp").removeHandler(handler)


def test_solve(runner, tmp_path):
    out, plot = tmp_path / "trace.csv", tmp_path / "rrn.png"
    args = ["solve", "--dims", "8,3,3,7,2", "--method", "ATERK-both-MD", "--tol", "1e-3"]
    result = runner.invoke(main_cli, [*args, "--out", str(out), "--plot", str(plot)])
    assert result.exit_code == 0, result.output
    assert "ATERK-both-MD: converged" in result.output
    assert out.read_text().startswith("iter,rrn,err_fmn,i,j,elapsed_s")
    assert plot.stat().st_size > 0


def test_bench(runner, tmp_path):
    out = tmp_path / "results.jsonl"
    args = [
        "bench",
        "--dims",
        "6,3,2,5,2",
        "--method",
        "NTERK-both,TERCD-left",
        "--method",
        "TESP-gaussian",
        "--trials",
        "2",
        "--tol",
        "1e-3",
        "--no-timing",
        "--out",
        str(out),
    ]
    result = runner.invoke(main_cli, args)
    assert result.exit_code == 0, result.output
    rows = io.read_jsonl(out)
    assert [row["method"] for row in rows] == ["NTERK-both", "TERCD-left", "TESP-gaussian"]
    assert all("mean_cpu_s" not in row for row in rows)


def test_config_file(runner, tmp_path):
    config = tmp_path / "bench.cfg"
    config.write_text(
        "# small grid\n"
        "dims = 6,3,2,5,2\n"
        "method = ATERK-both-PR\n"
        "trials = 1\n"
        "max-iters = 4\n"
    )
    out = tmp_path / "results.jsonl"
    args = ["bench", "--config", str(config), "--trials", "2", "--out", str(out)]
    result = runner.invoke(main_cli, args)
    assert result.exit_code == 0, result.output
    (row,) = io.read_jsonl(out)
    assert row["method"] == "ATERK-both-PR"
    assert row["trials"] == 2
    assert row["mean_iterations"] <= 4


def test_config_file_unknown_key(runner, tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("tolerance = 1e-3\n")
    result = runner.invoke(main_cli, ["solve", "--config", str(config)])
    assert result.exit_code == 2
    assert "tolerance" in result.output


def test_deblur(runner, tmp_path):
    image = np.random.default_rng(0).uniform(size=(3, 6, 5))
    path = tmp_path / "image.npy"
    np.save(path, image)
    args = ["deblur", "--image", str(path), "--sigma", "0.6", "--bandwidth", "1"]
    args += ["--method", "TERK-left", "--max-iters", "50", "--out", str(tmp_path / "out")]
    result = runner.invoke(main_cli, args)
    assert result.exit_code == 0, result.output
    assert "blurred: PSNR" in result.output
    assert (tmp_path / "out" / "TERK-left.png").exists()
    (row,) = io.read_jsonl(tmp_path / "out" / "results.jsonl")
    assert row["status_counts"] == {"iter_cap": 1}


def test_analyze(runner, tmp_path):
    out = tmp_path / "report.jsonl"
    args = ["analyze", "--dims", "5,2,2,4,2", "--method", "TERCD-both", "--out", str(out)]
    result = runner.invoke(main_cli, args)
    assert result.exit_code == 0, result.output
    (report,) = io.read_jsonl(out)
    assert report["preset"] == "TERCD-both"
    assert 0.0 <= report["rho_md"] <= report["rho_ntesp"] < 1.0


@pytest.mark.parametrize(
    "args",
    [
        ["solve", "--method", "NTERK-sideways"],
        ["solve", "--theta", "2.0", "--method", "ATERK-both-CS"],
        ["bench", "--trials", "0", "--out", "unused.jsonl"],
    ],
)
def test_user_errors(runner, args):
    result = runner.invoke(main_cli, args)
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert result.exception is None or isinstance(result.exception, SystemExit)


def test_bad_dims(runner):
    result = runner.invoke(main_cli, ["solve", "--dims", "1,2,3"])
    assert result.exit_code == 2


def test_deblur_rejects_malformed_image(runner, tmp_path):
    path = tmp_path / "image.npy"
    np.save(path, np.zeros((6, 5)))
    args = ["deblur", "--image", str(path), "--out", str(tmp_path / "out")]
    result = runner.invoke(main_cli, args)
    assert result.exit_code == 1
    assert "Error: Expected planar 3 x h x w" in result.output


def test_deblur_observation_size(runner, tmp_path):
    args = ["deblur", "--size", "6x4", "--observation-size", "8x6", "--sigma", "0.6"]
    args += ["--bandwidth", "1", "--method", "TRK", "--max-iters", "20"]
    result = runner.invoke(main_cli, [*args, "--out", str(tmp_path / "out")])
    assert result.exit_code == 0, result.output
    assert "TRK: PSNR" in result.output
    assert (tmp_path / "out" / "TRK.png").exists()
