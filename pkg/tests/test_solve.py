"""Tests for the sketch-and-project drivers."""

from __future__ import annotations

import numpy as np
import pytest
import torch

from tesp.algebra import WeightPair, zeros
from tesp.bench import gen_random_equation
from tesp.errors import ParameterError
from tesp.sketch import MethodPreset, SketchSet, build_preset, preset_names
from tesp.solver import SolverConfig, rrn, solve

DESCENT_CONFIGS = [dict(method="NTESP", preset=name) for name in preset_names()] + [
    dict(method="NTESP", preset="TERK-both", per_slice_sketch=True),
    dict(method="ATESP-MD", preset="TERK-both"),
    dict(method="ATESP-PR", preset="TERCD-both"),
    dict(method="ATESP-CS", preset="TERK-RCD", theta=0.3),
    dict(method="TESP-stream", stream_kind="gaussian", left_sketch_size=3, right_sketch_size=2),
    dict(method="TESP-stream", stream_kind="sampling", left_sketch_size=2),
]


@pytest.mark.parametrize("options", DESCENT_CONFIGS, ids=lambda o: "-".join(map(str, o.values())))
def test_error_drops_by_sketched_loss(descent_problem, options):
    config = SolverConfig(**options, rrn_tol=1e-300, max_iters=500, seed=3)
    _, trace = solve(descent_problem, config)
    errors = np.array(trace.err_history()) ** 2
    losses = np.array([record.chosen_loss for record in trace.records[1:]])
    assert np.all(np.diff(errors) <= 1e-10 * errors[0])
    np.testing.assert_allclose(errors[1:], errors[:-1] - losses, rtol=0.0, atol=1e-8 * errors[0])


@pytest.mark.parametrize("seed", range(10))
def test_full_sketches_converge_in_one_step(seed):
    problem = gen_random_equation(4, 4, 3, 3, 3, seed=seed)
    m, r, s, n, l = problem.dims
    weights = WeightPair.identity(r, s, l)
    sketches = MethodPreset(SketchSet.full(m, l), SketchSet.full(n, l), weights)
    x, trace = solve(problem, SolverConfig(method="NTESP", sketches=sketches, rrn_tol=1e-10))
    assert trace.status == "converged"
    assert trace.num_iterations == 1
    assert problem.X_star is not None
    torch.testing.assert_close(x.data, problem.X_star.data, rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("method", ["NTESP", "ATESP-PR", "ATESP-CS", "TESP-stream"])
def test_same_seed_same_run(small_problem, method):
    preset = None if method == "TESP-stream" else "TERK-both"
    runs = [
        solve(small_problem, SolverConfig(method=method, preset=preset, max_iters=60, seed=9))
        for _ in range(2)
    ]
    (x1, t1), (x2, t2) = runs
    assert torch.equal(x1.data, x2.data)
    assert t1.chosen_indices() == t2.chosen_indices()
    assert t1.rrn_history() == t2.rrn_history()


def test_stopping_caps(small_problem):
    _, trace = solve(small_problem, SolverConfig(preset="TERK-both", rrn_tol=1e-300, max_iters=7))
    assert trace.status == "iter_cap"
    assert trace.num_iterations == 7
    assert len(trace.records) == 8

    config = SolverConfig(preset="TERK-both", rrn_tol=1e-300, max_seconds=1e-9)
    _, trace = solve(small_problem, config)
    assert trace.status == "time_cap"

    _, trace = solve(small_problem, SolverConfig(preset="TERK-both", rrn_tol=1e-3))
    assert trace.status == "converged"
    assert trace.final_rrn < 1e-3
    assert trace.records[0].rrn == 1.0


def test_trace_bookkeeping(small_problem):
    config = SolverConfig(method="ATESP-MD", preset="TERCD-left", max_iters=12, record_losses=True)
    _, trace = solve(small_problem, config)
    assert trace.method == "ATESP-MD[TERCD-left]"
    assert trace.loss_tables is not None
    assert len(trace.loss_tables) == trace.num_iterations
    assert trace.loss_tables[0].shape == (3, 1)
    rows = trace.to_rows(include_timing=False)
    assert set(rows[0]) == {"iter", "rrn", "err_fmn", "i", "j"}
    assert rows[0]["i"] is None and rows[1]["j"] == 0


def test_nonzero_start(small_problem, make_tubal):
    config = SolverConfig(preset="TERK-both", x0=make_tubal(3, 3, 3, seed=4), max_iters=3)
    _, trace = solve(small_problem, config)
    assert not trace.theory_applicable
    config = SolverConfig(preset="TERK-both", max_iters=3)
    assert solve(small_problem, config)[1].theory_applicable


@pytest.mark.parametrize(
    "options",
    [
        dict(method="NTESP"),
        dict(preset="TERK-both", theta=1.5),
        dict(preset="TERK-both", rrn_tol=0.0),
        dict(preset="TERK-both", max_iters=-1),
        dict(method="ATESP-MD", preset="TERK-both", per_slice_sketch=True),
        dict(method="TESP-stream", stream_kind="uniform"),
        dict(method="TESP-stream", left_sketch_size=0),
        dict(method="ADAPTIVE", preset="TERK-both"),
    ],
)
def test_invalid_configs(small_problem, options):
    with pytest.raises(ParameterError):
        solve(small_problem, SolverConfig(**options))


def test_preset_and_sketches_are_exclusive(small_problem):
    sketches = build_preset("TERK-left", small_problem.A, small_problem.B)
    with pytest.raises(ParameterError):
        solve(small_problem, SolverConfig(preset="TERK-left", sketches=sketches))


def _matrix_run(problem, preset, iterations=40):
    config = SolverConfig(preset=preset, rrn_tol=1e-300, max_iters=iterations, seed=2)
    x, trace = solve(problem, config)
    a, b, c = (t.frontal(0).numpy() for t in (problem.A, problem.B, problem.C))
    return x.frontal(0).numpy(), trace.chosen_indices(), a, b, c


def test_single_slice_terk_both():
    problem = gen_random_equation(8, 3, 3, 7, 1, seed=21)
    x, chosen, a, b, c = _matrix_run(problem, "TERK-both")
    expected = np.zeros((3, 3))
    for i, j in chosen:
        a_i, b_j = a[i : i + 1], b[:, j : j + 1]
        res = a_i @ expected @ b_j - c[i, j]
        expected = expected - a_i.T @ res @ b_j.T / (a_i @ a_i.T * (b_j.T @ b_j))
    np.testing.assert_allclose(x, expected, atol=1e-10)


def test_single_slice_terk_left():
    problem = gen_random_equation(8, 3, 3, 7, 1, seed=22)
    x, chosen, a, b, c = _matrix_run(problem, "TERK-left")
    expected = np.zeros((3, 3))
    b_pinv = np.linalg.pinv(b)
    for i, j in chosen:
        assert j == 0
        a_i = a[i : i + 1]
        expected = expected - a_i.T @ (a_i @ expected @ b - c[i : i + 1]) @ b_pinv / (a_i @ a_i.T)
    np.testing.assert_allclose(x, expected, atol=1e-10)


def test_single_slice_terk_right():
    problem = gen_random_equation(8, 3, 3, 7, 1, seed=23)
    x, chosen, a, b, c = _matrix_run(problem, "TERK-right")
    expected = np.zeros((3, 3))
    a_pinv = np.linalg.pinv(a)
    for i, j in chosen:
        assert i == 0
        b_j = b[:, j : j + 1]
        res = a @ expected @ b_j - c[:, j : j + 1]
        expected = expected - a_pinv @ res @ b_j.T / (b_j.T @ b_j)
    np.testing.assert_allclose(x, expected, atol=1e-10)


def test_single_slice_tercd_right():
    problem = gen_random_equation(8, 3, 3, 7, 1, seed=24)
    x, chosen, a, b, c = _matrix_run(problem, "TERCD-right")
    expected = np.zeros((3, 3))
    a_pinv = np.linalg.pinv(a)
    n_inv = np.linalg.inv(b @ b.T)
    for _, j in chosen:
        v = b.T[:, j : j + 1]
        g = v @ np.linalg.pinv(v.T @ b.T @ n_inv @ b @ v) @ v.T
        expected = expected - a_pinv @ (a @ expected @ b - c) @ g @ b.T @ n_inv
    np.testing.assert_allclose(x, expected, atol=1e-10)


def test_relative_residual_norm(small_problem):
    _, r, s, _, l = small_problem.dims
    baseline = small_problem.C.norm()
    assert rrn(zeros(r, s, l), small_problem, baseline) == pytest.approx(1.0)
    assert small_problem.X_star is not None
    assert rrn(small_problem.X_star, small_problem, baseline) < 1e-12
    assert rrn(zeros(r, s, l), small_problem, 0.0) == 0.0
    with pytest.raises(ParameterError):
        rrn(zeros(r, s, l), small_problem, -1.0)


@pytest.mark.parametrize("method", ["NTESP", "ATESP-MD", "ATESP-PR", "ATESP-CS"])
def test_last_pair_has_zero_loss(descent_problem, method):
    config = SolverConfig(
        method=method,
        preset="TERK-both",
        rrn_tol=1e-300,
        max_iters=200,
        seed=4,
        record_losses=True,
    )
    _, trace = solve(descent_problem, config)
    assert trace.loss_tables is not None
    scale = float(trace.loss_tables[0].max())
    for table, previous in zip(trace.loss_tables[1:], trace.chosen_indices()):
        assert previous is not None
        assert float(table[previous]) <= 1e-10 * scale
