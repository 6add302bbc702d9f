"""Hermitian eigendecomposition, spectral projectors and polynomial calculus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import DegenerateSeparation, NoConvergence, NotHermitian, NotPSD, ShapeMismatch
from .matrix import ComplexMatrix, as_array

__all__ = [
    "HermitianEigen",
    "SpectralDecomposition",
    "CharPoly",
    "hermitian_eig",
    "hermitian_eigenvalues",
    "gram_eig",
    "distinct_spectrum",
    "spectral_projectors",
    "projectors_by_polynomial",
    "char_poly",
    "apply_poly",
]

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-15
MAX_SWEEPS = 64
CLUSTER_TOL = 1e-8
PSD_TOL = 1e-10
CHAR_POLY_MAX = 30


@dataclass(frozen=True)
class HermitianEigen:
    """Eigenvalues (descending) and the unitary whose columns are eigenvectors."""

    eigenvalues: tuple[float, ...]
    vectors: ComplexMatrix


@dataclass(frozen=True)
class SpectralDecomposition:
    """``H = sum(alpha_a * E_a)`` with orthogonal projectors ``E_a``."""

    distinct_values: tuple[float, ...]
    projectors: tuple[ComplexMatrix, ...]
    multiplicities: tuple[int, ...]

    def reconstruct(self) -> ComplexMatrix:
        return apply_poly(self, [1.0, 0.0])


@dataclass(frozen=True)
class CharPoly:
    """Coefficients of ``det(z*1 - A)``, highest degree first."""

    coefficients: tuple[complex, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: complex) -> complex:
        return complex(np.polyval(np.asarray(self.coefficients), z))


def _round_robin(n: int, order: Sequence[int] | None) -> list[tuple[np.ndarray, np.ndarray]]:
    """Rounds of disjoint index pairs covering every pair exactly once."""
    labels = list(range(n)) if order is None else [int(i) for i in order]
    if sorted(labels) != list(range(n)):
        raise ValueError(f"order must be a permutation of range({n})")
    players = labels + ([-1] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for i in range(size // 2):
            x, y = players[i], players[size - 1 - i]
            if x >= 0 and y >= 0:
                pairs.append((min(x, y), max(x, y)))
        pairs.sort()
        p, q = np.array(pairs, dtype=np.intp).T
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


_TINY = np.finfo(np.float64).tiny


def _jacobi(h: np.ndarray, tol: float, max_sweeps: int, order, want_vectors: bool):
    n = h.shape[0]
    h = 0.5 * (h + h.conj().T)
    v = np.eye(n, dtype=np.complex128) if want_vectors else None
    scale = np.linalg.norm(h)
    if n == 1 or scale == 0.0:
        return np.real(np.diag(h)).copy(), v
    rounds = _round_robin(n, order)
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps + 1):
        off = np.linalg.norm(h[offmask])
        if off <= tol * scale:
            return np.real(np.diag(h)).copy(), v
        if _ == max_sweeps:
            break
        for p, q in rounds:
            a = h[p, p].real
            d = h[q, q].real
            b = h[p, q]
            mod = np.abs(b)
            # subnormal entries are treated as zero; complex division by them overflows
            live = mod >= _TINY
            if not live.any():
                continue
            safe = np.where(live, mod, 1.0)
            phase = np.where(live, b.real / safe + 1j * (b.imag / safe), 1.0)
            with np.errstate(over="ignore"):
                theta = (d - a) / (2.0 * safe)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            g11, g12 = c, s
            g21, g22 = -s * phase.conj(), c * phase.conj()
            cp, cq = h[:, p], h[:, q]
            h[:, p] = cp * g11 + cq * g21
            h[:, q] = cp * g12 + cq * g22
            rp, rq = h[p, :], h[q, :]
            h[p, :] = np.conj(g11)[:, None] * rp + np.conj(g21)[:, None] * rq
            h[q, :] = np.conj(g12)[:, None] * rp + np.conj(g22)[:, None] * rq
            h[p, q] = 0.0
            h[q, p] = 0.0
            h[p, p] = a - t * mod
            h[q, q] = d + t * mod
            if v is not None:
                vp, vq = v[:, p], v[:, q]
                v[:, p] = vp * g11 + vq * g21
                v[:, q] = vp * g12 + vq * g22
    raise NoConvergence(f"Jacobi sweeps did not converge within {max_sweeps} sweeps")


def _check_hermitian(h: np.ndarray, hermitian_tol: float) -> None:
    if h.shape[0] != h.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {h.shape[0]}x{h.shape[1]}")
    gap = np.linalg.norm(h - h.conj().T)
    if gap > hermitian_tol * np.linalg.norm(h):
        raise NotHermitian(f"||H - H*||_F = {gap:.3e} exceeds tolerance")


def hermitian_eig(
    h: Any,
    tol: float = JACOBI_TOL,
    *,
    hermitian_tol: float = HERMITIAN_TOL,
    max_sweeps: int = MAX_SWEEPS,
    order: Sequence[int] | None = None,
) -> HermitianEigen:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps visit all index pairs in round-robin order (disjoint pairs are
    rotated together) until the off-diagonal Frobenius mass is at most
    ``tol * ||H||_F``. ``order`` relabels the indices before scheduling, which
    changes the rotation sequence but not the result.
    """
    arr = np.array(as_array(h))
    _check_hermitian(arr, hermitian_tol)
    w, v = _jacobi(arr, tol, max_sweeps, order, want_vectors=True)
    idx = np.argsort(-w, kind="stable")
    return HermitianEigen(tuple(float(x) for x in w[idx]), ComplexMatrix._wrap(v[:, idx]))


def hermitian_eigenvalues(
    h: Any, tol: float = JACOBI_TOL, *, hermitian_tol: float = HERMITIAN_TOL, max_sweeps: int = MAX_SWEEPS
) -> tuple[float, ...]:
    """Eigenvalues only, descending. Skips accumulating the rotations."""
    arr = np.array(as_array(h))
    _check_hermitian(arr, hermitian_tol)
    w, _ = _jacobi(arr, tol, max_sweeps, None, want_vectors=False)
    return tuple(float(x) for x in np.sort(w)[::-1])


def _clamp_psd(w: np.ndarray, gram_norm: float, psd_tol: float) -> np.ndarray:
    floor = -psd_tol * gram_norm
    if w.size and w.min() < floor:
        raise NotPSD(f"eigenvalue {w.min():.3e} is below -{psd_tol:g}*||G||")
    return np.where(w < 0.0, 0.0, w)


def gram_eig(a: Any, side: str = "AAstar", *, psd_tol: float = PSD_TOL, vectors: bool = True):
    """Eigendecomposition of ``A A*`` (side="AAstar") or ``A* A`` (side="AstarA").

    Slightly negative eigenvalues within ``psd_tol * ||G||_F`` are clamped to
    zero. Returns a :class:`HermitianEigen`, or a tuple of eigenvalues when
    ``vectors`` is false.
    """
    x = as_array(a)
    if side == "AAstar":
        g = x @ x.conj().T
    elif side == "AstarA":
        g = x.conj().T @ x
    else:
        raise ValueError(f"unknown Gram side {side!r}")
    gnorm = float(np.linalg.norm(g))
    if not vectors:
        w = _clamp_psd(np.array(hermitian_eigenvalues(g)), gnorm, psd_tol)
        return tuple(float(x) for x in w)
    eig = hermitian_eig(g)
    w = _clamp_psd(np.array(eig.eigenvalues), gnorm, psd_tol)
    return HermitianEigen(tuple(float(x) for x in w), eig.vectors)


def distinct_spectrum(
    eigenvalues: Sequence[float], cluster_tol: float = CLUSTER_TOL
) -> tuple[tuple[float, ...], tuple[int, ...]]:
    """Merge nearly equal neighbours of a descending eigenvalue list.

    Consecutive values closer than ``cluster_tol * max(1, |largest|)`` join
    one cluster whose representative is the mean of its members.
    """
    vals = [float(x) for x in eigenvalues]
    if not vals:
        return (), ()
    if any(b > a for a, b in zip(vals, vals[1:])):
        raise ValueError("eigenvalues must be sorted in descending order")
    gap = cluster_tol * max(1.0, abs(vals[0]), abs(vals[-1]))
    groups: list[list[float]] = [[vals[0]]]
    for prev, cur in zip(vals, vals[1:]):
        if abs(prev - cur) <= gap:
            groups[-1].append(cur)
        else:
            groups.append([cur])
    return tuple(float(np.mean(g)) for g in groups), tuple(len(g) for g in groups)


def spectral_projectors(
    h: Any, eig: HermitianEigen | None = None, cluster_tol: float = CLUSTER_TOL
) -> SpectralDecomposition:
    """Group eigenvectors by distinct eigenvalue and form ``E_a = sum v v*``."""
    if eig is None:
        eig = hermitian_eig(h)
    values, mults = distinct_spectrum(eig.eigenvalues, cluster_tol)
    vecs = eig.vectors.array
    projectors = []
    start = 0
    for k in mults:
        block = vecs[:, start:start + k]
        projectors.append(ComplexMatrix._wrap(block @ block.conj().T))
        start += k
    return SpectralDecomposition(values, tuple(projectors), mults)


def projectors_by_polynomial(
    a: Any, distinct_values: Sequence[complex], sep_tol: float | None = None
) -> list[ComplexMatrix]:
    """Projectors ``E_j = prod_{l != j} (A - alpha_l) / (alpha_j - alpha_l)``.

    ``sep_tol`` defaults to ``1e-6 * max|alpha|``; any pair of values at most
    that far apart raises :class:`DegenerateSeparation`.
    """
    x = as_array(a)
    n = x.shape[0]
    if x.shape != (n, n):
        raise ShapeMismatch(f"expected a square matrix, got {x.shape[0]}x{x.shape[1]}")
    alphas = [complex(v) for v in distinct_values]
    if sep_tol is None:
        sep_tol = 1e-6 * max((abs(v) for v in alphas), default=0.0)
    for j, aj in enumerate(alphas):
        for al in alphas[j + 1:]:
            if abs(aj - al) <= sep_tol:
                raise DegenerateSeparation(f"eigenvalues {aj} and {al} are within {sep_tol:.3e}")
    eye = np.eye(n, dtype=np.complex128)
    out = []
    for j, aj in enumerate(alphas):
        e = eye.copy()
        for l, al in enumerate(alphas):
            if l != j:
                e = e @ (x - al * eye) / (aj - al)
        out.append(ComplexMatrix._wrap(e))
    return out


def char_poly(a: Any, max_n: int = CHAR_POLY_MAX) -> CharPoly:
    """Characteristic polynomial by the Faddeev-LeVerrier recurrence."""
    x = as_array(a)
    n = x.shape[0]
    if x.shape != (n, n):
        raise ShapeMismatch(f"expected a square matrix, got {x.shape[0]}x{x.shape[1]}")
    if n > max_n:
        raise ValueError(f"char_poly is limited to n <= {max_n}, got {n}")
    coeffs = [1.0 + 0j]
    m = np.zeros_like(x)
    eye = np.eye(n, dtype=np.complex128)
    for k in range(1, n + 1):
        m = x @ m + coeffs[-1] * eye
        coeffs.append(complex(-np.trace(x @ m) / k))
    return CharPoly(tuple(coeffs))


def apply_poly(decomp: SpectralDecomposition, p: Sequence[complex]) -> ComplexMatrix:
    """``sum_a p(alpha_a) E_a``; coefficients are highest degree first."""
    coeffs = np.asarray(p, dtype=np.complex128)
    n = decomp.projectors[0].rows
    out = np.zeros((n, n), dtype=np.complex128)
    for alpha, e in zip(decomp.distinct_values, decomp.projectors):
        out += np.polyval(coeffs, alpha) * e.array
    return ComplexMatrix._wrap(out)
