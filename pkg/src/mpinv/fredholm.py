"""Regularized recovery for a discretized first-kind integral equation on [0, 1].

The integral ``int_0^1 k(x, y) u(y) dy`` is discretized with the trapezoid
rule on a uniform grid, so ``A[i, j] = w_j * k(x_i, y_j)``. The right-hand side
is manufactured as ``f = A u_true`` and ``u`` is recovered from the
regularized solutions ``X(mu) f`` along a decreasing mu schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import ComplexMatrix
from .pinv import PinvOptions, _schedule, regularized_inverse

__all__ = ["KERNELS", "SOLUTIONS", "FredholmStep", "FredholmResult", "discretize", "fredholm_demo"]

KERNELS = {
    "gaussian": lambda x, y: np.exp(-((x - y) ** 2)),
    "cauchy": lambda x, y: 1.0 / (1.0 + (x - y) ** 2),
}

SOLUTIONS = {
    "sine": lambda y: np.sin(np.pi * y),
    "quadratic": lambda y: y * (1.0 - y),
    "zero": lambda y: np.zeros_like(y),
}


@dataclass(frozen=True)
class FredholmStep:
    mu: float
    relative_error: float
    residual: float


@dataclass(frozen=True)
class FredholmResult:
    grid: np.ndarray
    operator: ComplexMatrix
    rhs: np.ndarray
    u_true: np.ndarray
    u_rec: np.ndarray
    steps: tuple[FredholmStep, ...]


def discretize(kernel: str, grid_n: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid points and the trapezoid-weighted kernel matrix."""
    if grid_n < 8:
        raise ValueError(f"grid_n must be at least 8, got {grid_n}")
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}; choose from {', '.join(KERNELS)}")
    grid = np.linspace(0.0, 1.0, grid_n)
    weights = np.full(grid_n, 1.0 / (grid_n - 1))
    weights[[0, -1]] *= 0.5
    matrix = KERNELS[kernel](grid[:, None], grid[None, :]) * weights[None, :]
    return grid, matrix


def fredholm_demo(
    kernel: str = "gaussian",
    solution: str = "sine",
    grid_n: int = 32,
    opts: PinvOptions | None = None,
) -> FredholmResult:
    """Recover a manufactured solution, recording error and residual at every mu."""
    if solution not in SOLUTIONS:
        raise ValueError(f"unknown solution {solution!r}; choose from {', '.join(SOLUTIONS)}")
    opts = opts or PinvOptions()
    grid, a = discretize(kernel, grid_n)
    u_true = SOLUTIONS[solution](grid)
    f = a @ u_true
    true_norm = float(np.linalg.norm(u_true))
    steps = []
    u = np.zeros(grid_n, dtype=np.complex128)
    for mu in _schedule(a, opts):
        u = regularized_inverse(a, mu, f[:, None]).array[:, 0]
        err = float(np.linalg.norm(u - u_true))
        steps.append(
            FredholmStep(
                mu=float(mu),
                relative_error=err / true_norm if true_norm > 0 else err,
                residual=float(np.linalg.norm(a @ u - f)),
            )
        )
    return FredholmResult(grid, ComplexMatrix(a), f, u_true, u, tuple(steps))
