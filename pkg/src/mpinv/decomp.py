"""Positive square roots, polar decomposition and SVD built from Gram eigendecompositions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .eigen import PSD_TOL, hermitian_eig, hermitian_eigenvalues, _clamp_psd
from .errors import ShapeMismatch
from .matrix import ComplexMatrix, EmbeddingShape, as_array, embed_square

__all__ = [
    "PolarFactors",
    "SvdFactors",
    "sqrt_psd",
    "polar",
    "polar_left",
    "svd_square",
    "svd_rect",
    "singular_values",
]

# Columns with ||A v_k|| at or below this fraction of the largest are treated
# as null directions and replaced by completion vectors.
NULL_TOL = 1e-14


@dataclass(frozen=True)
class PolarFactors:
    """``A = unitary @ psd_factor`` (side="right") or ``A = psd_factor @ unitary`` (side="left")."""

    unitary: ComplexMatrix
    psd_factor: ComplexMatrix
    side: str = "right"

    def reconstruct(self) -> ComplexMatrix:
        if self.side == "right":
            return self.unitary @ self.psd_factor
        return self.psd_factor @ self.unitary


@dataclass(frozen=True)
class SvdFactors:
    """``A = V S W*``; for a rectangular input the factors belong to its square embedding."""

    V: ComplexMatrix
    S: ComplexMatrix
    W: ComplexMatrix
    shape: EmbeddingShape | None = None

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(float(x) for x in np.real(np.diag(self.S.array)))

    def reconstruct(self) -> ComplexMatrix:
        full = self.V.array @ self.S.array @ self.W.array.conj().T
        if self.shape is not None:
            full = full[: self.shape.rows, : self.shape.cols]
        return ComplexMatrix._wrap(full)


def _square(a: Any) -> np.ndarray:
    x = as_array(a)
    if x.shape[0] != x.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {x.shape[0]}x{x.shape[1]}")
    return x


def sqrt_psd(h: Any, psd_tol: float = PSD_TOL) -> ComplexMatrix:
    """Positive semidefinite square root ``P D^{1/2} P*``.

    Eigenvalues in ``[-psd_tol*||H||_F, 0)`` are clamped to zero; anything more
    negative raises :class:`NotPSD`.
    """
    x = _square(h)
    eig = hermitian_eig(x)
    d = _clamp_psd(np.array(eig.eigenvalues), float(np.linalg.norm(x)), psd_tol)
    p = eig.vectors.array
    return ComplexMatrix._wrap((p * np.sqrt(d)) @ p.conj().T)


def _orthogonalize(v: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    # Modified Gram-Schmidt, two passes
    for _ in range(2):
        for q in basis:
            v = v - np.vdot(q, v) * q
    return v


def _complete_basis(columns: list[np.ndarray | None], n: int) -> np.ndarray:
    """Fill the empty slots with orthonormal vectors drawn from the canonical basis.

    Candidates e_0, e_1, ... are taken in order when their residual after
    projection is at least 0.5. If that pass leaves slots open, the candidate
    with the largest residual is taken until the basis is complete.
    """
    basis = [c for c in columns if c is not None]
    fill: list[np.ndarray] = []
    need = n - len(basis)
    eye = np.eye(n, dtype=np.complex128)
    for j in range(n):
        if len(fill) == need:
            break
        r = _orthogonalize(eye[:, j], basis)
        norm = np.linalg.norm(r)
        if norm >= 0.5:
            r = r / norm
            basis.append(r)
            fill.append(r)
    while len(fill) < need:
        residuals = [_orthogonalize(eye[:, j], basis) for j in range(n)]
        j = int(np.argmax([np.linalg.norm(r) for r in residuals]))
        r = residuals[j] / np.linalg.norm(residuals[j])
        basis.append(r)
        fill.append(r)
    it = iter(fill)
    return np.column_stack([c if c is not None else next(it) for c in columns])


def _polar_parts(x: np.ndarray, order: Sequence[int] | None):
    """Return (Q, s, P) with ``x P = Q diag(s)``, Q and P unitary, s >= 0."""
    n = x.shape[0]
    g = x.conj().T @ x
    p = hermitian_eig(g, order=order).vectors.array
    images = x @ p
    s = np.linalg.norm(images, axis=0)
    cutoff = NULL_TOL * s.max() if s.max() > 0 else 0.0
    columns: list[np.ndarray | None] = []
    accepted: list[np.ndarray] = []
    for k in range(n):
        if s[k] <= cutoff or s[k] == 0.0:
            columns.append(None)
            continue
        w = _orthogonalize(images[:, k] / s[k], accepted)
        norm = np.linalg.norm(w)
        if norm < 0.5:
            columns.append(None)
            continue
        w = w / norm
        accepted.append(w)
        columns.append(w)
    q = _complete_basis(columns, n)
    return q, s, p


def polar(a: Any, *, order: Sequence[int] | None = None) -> PolarFactors:
    """Polar decomposition ``A = U |A|`` of a square matrix.

    With ``A* A = P D P*`` the unitary is ``U = Q P*`` where column k of Q is
    ``A v_k / ||A v_k||`` for non-null directions, orthonormally completed.
    ``order`` is forwarded to the Jacobi sweep schedule.
    """
    x = _square(a)
    q, s, p = _polar_parts(x, order)
    unitary = q @ p.conj().T
    modulus = (p * s) @ p.conj().T
    return PolarFactors(ComplexMatrix._wrap(unitary), ComplexMatrix._wrap(0.5 * (modulus + modulus.conj().T)))


def polar_left(a: Any, *, order: Sequence[int] | None = None) -> PolarFactors:
    """Left polar form ``A = sqrt(A A*) V``, obtained from the polar form of ``A*``."""
    x = _square(a)
    right = polar(x.conj().T, order=order)
    return PolarFactors(right.unitary.H, right.psd_factor, side="left")


def svd_square(a: Any, *, order: Sequence[int] | None = None) -> SvdFactors:
    """``A = V S W*`` with ``V = U P``, ``W = P`` and ``S = D^{1/2}`` sorted descending."""
    x = _square(a)
    q, s, p = _polar_parts(x, order)
    idx = np.argsort(-s, kind="stable")
    # U P = Q P* P = Q
    return SvdFactors(
        V=ComplexMatrix._wrap(q[:, idx]),
        S=ComplexMatrix._wrap(np.diag(s[idx])),
        W=ComplexMatrix._wrap(p[:, idx]),
    )


def svd_rect(a: Any) -> SvdFactors:
    """SVD of the (m+n) x (m+n) zero-padded embedding of an m x n matrix."""
    padded, shape = embed_square(a)
    f = svd_square(padded)
    return SvdFactors(f.V, f.S, f.W, shape)


def singular_values(a: Any) -> tuple[float, ...]:
    """The min(m, n) singular values, descending, from the smaller Gram matrix."""
    x = as_array(a)
    g = x @ x.conj().T if x.shape[0] <= x.shape[1] else x.conj().T @ x
    d = np.array(hermitian_eigenvalues(g))
    d = np.where(d < 0.0, 0.0, d)
    return tuple(float(v) for v in np.sqrt(d))
