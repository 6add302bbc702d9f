"""Least squares through the pseudoinverse: minimum-norm solution plus the whole minimizing set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from .eigen import hermitian_eig
from .errors import ShapeMismatch
from .matrix import ComplexMatrix, as_array
from .pinv import PenroseReport, PinvOptions, pinv

__all__ = [
    "LeastSquaresSolution",
    "solve_least_squares",
    "kernel_projector",
    "range_projector",
    "minimizing_set_sample",
]

EXACT_TOL = 1e-9


@dataclass(frozen=True)
class LeastSquaresSolution:
    """Every minimizer of ``||A x - y||`` is ``x_min + kernel_projector @ z``.

    ``y`` may hold several right-hand sides as columns; ``residual_norm`` is
    then the Frobenius norm over all of them.
    """

    x_min: ComplexMatrix
    kernel_projector: ComplexMatrix
    residual_norm: float
    exact: bool
    route: str = ""
    report: PenroseReport | None = None


def _pinv_array(a: np.ndarray, opts: PinvOptions | None) -> np.ndarray:
    return pinv(a, opts).matrix.array


def _kernel_projector(x: np.ndarray, plus: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto ``Ker(A)``, refined beyond ``1 - A+ A``.

    ``1 - A+ A`` inherits the conditioning of ``A+``. One correction step
    ``K - A+ (A K)`` pulls its range back into the kernel, and the projector
    is then rebuilt from the eigenvectors of ``K K*`` for eigenvalues near 1,
    which are well separated from the rest.
    """
    n = x.shape[1]
    k = np.eye(n) - plus @ x
    k = k - plus @ (x @ k)
    eig = hermitian_eig(k @ k.conj().T)
    basis = eig.vectors.array[:, np.asarray(eig.eigenvalues) > 0.5]
    return basis @ basis.conj().T


def solve_least_squares(a: Any, y: Any, opts: PinvOptions | None = None) -> LeastSquaresSolution:
    x = as_array(a)
    rhs = as_array(y)
    m = x.shape[0]
    if rhs.shape[0] != m:
        raise ShapeMismatch(f"right-hand side has {rhs.shape[0]} rows, expected {m}")
    result = pinv(x, opts)
    plus = result.matrix.array
    x_min = plus @ rhs
    # ||(1 - A A+) y|| rather than ||A x_min - y||: same value, no cancellation in A x_min
    range_complement = np.eye(m) - x @ plus
    residual = float(np.linalg.norm(range_complement @ rhs))
    ynorm = float(np.linalg.norm(rhs))
    return LeastSquaresSolution(
        x_min=ComplexMatrix._wrap(x_min),
        kernel_projector=ComplexMatrix._wrap(_kernel_projector(x, plus)),
        residual_norm=residual,
        exact=residual <= EXACT_TOL * max(1.0, ynorm),
        route=result.route,
        report=result.report,
    )


def kernel_projector(a: Any, opts: PinvOptions | None = None) -> ComplexMatrix:
    """Orthogonal projector ``1 - A+ A`` onto ``Ker(A)``."""
    x = as_array(a)
    return ComplexMatrix._wrap(_kernel_projector(x, _pinv_array(x, opts)))


def range_projector(a: Any, opts: PinvOptions | None = None) -> ComplexMatrix:
    """Orthogonal projector ``1 - A A+`` onto the orthogonal complement of ``Ran(A)``."""
    x = as_array(a)
    return ComplexMatrix._wrap(np.eye(x.shape[0]) - x @ _pinv_array(x, opts))


def minimizing_set_sample(sol: LeastSquaresSolution, z: Any) -> ComplexMatrix:
    """The member ``x_min + kernel_projector @ z`` of the minimizing set."""
    zz = as_array(z)
    n = sol.kernel_projector.rows
    if zz.shape[0] != n:
        raise ShapeMismatch(f"z has {zz.shape[0]} rows, expected {n}")
    if zz.shape[1] != sol.x_min.cols:
        raise ShapeMismatch(f"z has {zz.shape[1]} columns, expected {sol.x_min.cols}")
    return ComplexMatrix._wrap(sol.x_min.array + sol.kernel_projector.array @ zz)
