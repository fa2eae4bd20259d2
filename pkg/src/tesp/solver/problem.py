"""Contains the consistent tensor equation A*X*B = C."""

from __future__ import annotations

import dataclasses

from tesp.algebra import TubalMatrix, t_product
from tesp.errors import ParameterError, ShapeError

# Relative residual of X_star above which the equation is treated as inconsistent.
CONSISTENCY_RTOL = 1e-8


@dataclasses.dataclass(frozen=True, eq=False)
class Problem:
    """A (m x r x l), B (s x n x l), C (m x n x l) and optionally a known solution."""

    A: TubalMatrix
    B: TubalMatrix
    C: TubalMatrix
    X_star: TubalMatrix | None = None

    def __post_init__(self) -> None:
        m, r, l = self.A.shape
        s, n, l_b = self.B.shape
        if l_b != l or self.C.tube_length != l:
            raise ShapeError("A, B and C must share one tube length.")
        if (self.C.rows, self.C.cols) != (m, n):
            raise ShapeError(f"C must be {m}x{n}x{l}, got {self.C.shape}.")
        if self.X_star is not None:
            if self.X_star.shape != (r, s, l):
                raise ShapeError(f"X_star must be {r}x{s}x{l}, got {self.X_star.shape}.")
            residual = (t_product(t_product(self.A, self.X_star), self.B) - self.C).norm()
            scale = self.C.norm()
            if residual > CONSISTENCY_RTOL * scale:
                raise ParameterError(
                    f"X_star does not solve the equation (residual {residual:.3e}, "
                    f"||C||_F {scale:.3e})."
                )

    @property
    def dims(self) -> tuple[int, int, int, int, int]:
        """(m, r, s, n, l)."""
        m, r, l = self.A.shape
        s, n, _ = self.B.shape
        return m, r, s, n, l

    def residual(self, x: TubalMatrix) -> TubalMatrix:
        """C - A*X*B."""
        return self.C - t_product(t_product(self.A, x), self.B)


def rrn(x: TubalMatrix, problem: Problem, baseline_residual_norm: float) -> float:
    """Relative residual norm ||C - A*X*B||_F / baseline; 0 when the baseline is 0."""
    if baseline_residual_norm < 0.0:
        raise ParameterError(f"Baseline must be non-negative, got {baseline_residual_norm}.")
    if baseline_residual_norm == 0.0:
        return 0.0
    return problem.residual(x).norm() / baseline_residual_norm
