"""Immutable dense complex matrices and the elementary operations on them.

Storage is a read-only ``complex128`` ndarray. Every public function accepts a
:class:`ComplexMatrix` or anything :func:`numpy.asarray` understands and
returns a :class:`ComplexMatrix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable

import numpy as np

from .errors import NonFiniteEntry, ShapeMismatch, SingularMatrix

__all__ = [
    "ComplexMatrix",
    "EmbeddingShape",
    "as_matrix",
    "adjoint",
    "matmul",
    "frobenius_norm",
    "inner_product",
    "identity",
    "zeros",
    "embed_square",
    "extract_rect",
    "solve_linear",
]


class ComplexMatrix:
    """Dense m x n complex matrix with value semantics.

    Entries are copied on construction and never change afterwards. NaN and
    infinite entries are rejected.
    """

    __slots__ = ("_a",)

    def __init__(self, data: Any):
        if isinstance(data, ComplexMatrix):
            self._a = data._a
            return
        arr = np.array(data, dtype=np.complex128)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ShapeMismatch(f"expected a non-empty 2-D array, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            bad = np.argwhere(~np.isfinite(arr))[0]
            raise NonFiniteEntry(f"non-finite entry at row {bad[0]}, column {bad[1]}")
        arr.flags.writeable = False
        self._a = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "ComplexMatrix":
        # Trusted fast path for arrays produced inside the package.
        obj = cls.__new__(cls)
        arr = np.array(arr, dtype=np.complex128)
        if not np.isfinite(arr).all():
            raise NonFiniteEntry("computation produced a non-finite entry")
        arr.flags.writeable = False
        obj._a = arr
        return obj

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the entries."""
        return self._a

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def H(self) -> "ComplexMatrix":
        return ComplexMatrix._wrap(self._a.conj().T)

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a.copy() if copy else self._a
        return self._a.astype(dtype)

    def __getitem__(self, key):
        return self._a[key]

    def __matmul__(self, other):
        return matmul(self, other)

    def __rmatmul__(self, other):
        return matmul(other, self)

    def __add__(self, other):
        return ComplexMatrix._wrap(self._a + _same_shape(self, other))

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        return ComplexMatrix._wrap(self._a - _same_shape(self, other))

    def __rsub__(self, other):
        return ComplexMatrix._wrap(_same_shape(self, other) - self._a)

    def __neg__(self):
        return ComplexMatrix._wrap(-self._a)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return ComplexMatrix._wrap(self._a * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return ComplexMatrix._wrap(self._a / complex(scalar))

    def __eq__(self, other):
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._a, other._a))

    def __hash__(self):
        return hash((self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"ComplexMatrix({self._a.tolist()!r})"

    def tolist(self) -> list[list[complex]]:
        return self._a.tolist()


def _same_shape(a: ComplexMatrix, other) -> np.ndarray:
    b = as_array(other)
    if b.shape != a.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return b


def as_array(a: Any) -> np.ndarray:
    """Entries of ``a`` as a 2-D complex ndarray (no copy for ComplexMatrix)."""
    if isinstance(a, ComplexMatrix):
        return a.array
    return ComplexMatrix(a).array


def as_matrix(a: Any) -> ComplexMatrix:
    return a if isinstance(a, ComplexMatrix) else ComplexMatrix(a)


@dataclass(frozen=True)
class EmbeddingShape:
    """Original (rows, cols) of a matrix padded into a square one."""

    rows: int
    cols: int

    @property
    def size(self) -> int:
        return self.rows + self.cols


def identity(n: int) -> ComplexMatrix:
    return ComplexMatrix._wrap(np.eye(n, dtype=np.complex128))


def zeros(rows: int, cols: int) -> ComplexMatrix:
    return ComplexMatrix._wrap(np.zeros((rows, cols), dtype=np.complex128))


def adjoint(a: Any) -> ComplexMatrix:
    """Conjugate transpose."""
    return ComplexMatrix._wrap(as_array(a).conj().T)


def matmul(a: Any, b: Any) -> ComplexMatrix:
    x, y = as_array(a), as_array(b)
    if x.shape[1] != y.shape[0]:
        raise ShapeMismatch(f"cannot multiply {x.shape[0]}x{x.shape[1]} by {y.shape[0]}x{y.shape[1]}")
    return ComplexMatrix._wrap(x @ y)


def frobenius_norm(a: Any) -> float:
    return float(np.linalg.norm(as_array(a)))


def inner_product(u: Any, v: Any) -> complex:
    """<u, v> = sum conj(u_i) v_i, antilinear in ``u``."""
    x, y = as_array(u), as_array(v)
    if x.shape != y.shape:
        raise ShapeMismatch(f"shapes {x.shape} and {y.shape} differ")
    return complex(np.vdot(x, y))


def embed_square(a: Any) -> tuple[ComplexMatrix, EmbeddingShape]:
    """Pad an m x n matrix to (m+n) x (m+n) with ``a`` in the top-left block."""
    x = as_array(a)
    m, n = x.shape
    out = np.zeros((m + n, m + n), dtype=np.complex128)
    out[:m, :n] = x
    return ComplexMatrix._wrap(out), EmbeddingShape(m, n)


def extract_rect(a: Any, shape: EmbeddingShape | tuple[int, int]) -> ComplexMatrix:
    """Top-left ``rows x cols`` block of a padded square matrix."""
    rows, cols = (shape.rows, shape.cols) if isinstance(shape, EmbeddingShape) else shape
    x = as_array(a)
    if rows > x.shape[0] or cols > x.shape[1]:
        raise ShapeMismatch(f"cannot take a {rows}x{cols} block of a {x.shape[0]}x{x.shape[1]} matrix")
    return ComplexMatrix._wrap(x[:rows, :cols])


def _solve(a: np.ndarray, b: np.ndarray, pivot_tol: float | None = None) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ShapeMismatch(f"coefficient matrix must be square, got {a.shape[0]}x{a.shape[1]}")
    if b.shape[0] != n:
        raise ShapeMismatch(f"right-hand side has {b.shape[0]} rows, expected {n}")
    if pivot_tol is None:
        pivot_tol = 1e-12 * float(np.abs(a).sum(axis=1).max())
    k = b.shape[1]
    work = np.empty((n, n + k), dtype=np.complex128)
    work[:, :n] = a
    work[:, n:] = b
    for j in range(n):
        # argmax returns the first maximum, so ties go to the lowest row index
        p = j + int(np.argmax(np.abs(work[j:, j])))
        if not abs(work[p, j]) >= pivot_tol or work[p, j] == 0:
            raise SingularMatrix(f"pivot {abs(work[p, j]):.3e} in column {j} is below {pivot_tol:.3e}")
        if p != j:
            work[[j, p]] = work[[p, j]]
        factors = work[j + 1:, j] / work[j, j]
        work[j + 1:, j:] -= np.outer(factors, work[j, j:])
    x = np.empty((n, k), dtype=np.complex128)
    for j in range(n - 1, -1, -1):
        x[j] = (work[j, n:] - work[j, j + 1:n] @ x[j + 1:]) / work[j, j]
    return x


def solve_linear(a: Any, b: Any, pivot_tol: float | None = None) -> ComplexMatrix:
    """Solve ``a @ x = b`` by Gaussian elimination with partial pivoting.

    Pivots are chosen by largest modulus, lowest row index on ties.
    ``pivot_tol`` defaults to ``1e-12`` times the largest absolute row sum
    of ``a``; a smaller best pivot raises :class:`SingularMatrix`.
    """
    return ComplexMatrix._wrap(_solve(as_array(a), as_array(b), pivot_tol))


def from_rows(rows: Iterable[Iterable[complex]]) -> ComplexMatrix:
    return ComplexMatrix([list(r) for r in rows])
