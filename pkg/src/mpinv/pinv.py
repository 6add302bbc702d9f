"""Moore-Penrose pseudoinverse by several independent routes.

Every route takes an m x n matrix and returns the n x m pseudoinverse. The
:func:`pinv` front door dispatches between them and always attaches a
:class:`PenroseReport`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator

import numpy as np

from .decomp import svd_square
from .eigen import CLUSTER_TOL, distinct_spectrum, gram_eig, hermitian_eig
from .errors import DegenerateSeparation, NoConvergence, NumericalError, RouteFailed, ShapeMismatch, SingularMatrix
from .matrix import ComplexMatrix, _solve, as_array, embed_square

__all__ = [
    "ROUTES",
    "PenroseReport",
    "PinvOptions",
    "PinvResult",
    "PolynomialInstability",
    "TikhonovStep",
    "verify_penrose",
    "pinv",
    "pinv_spectral",
    "pinv_via_AstarA",
    "pinv_polynomial",
    "pinv_tikhonov",
    "pinv_svd",
    "pinv_fullrank",
    "regularized_inverse",
    "tikhonov_path",
]

ROUTES = ("auto", "spectral", "via_AstarA", "polynomial", "tikhonov", "svd", "fullrank")
RANK_TOL = 1e-10
ACCEPT_TOL = 1e-9


class PolynomialInstability(DegenerateSeparation):
    """The interpolating polynomial was evaluated but failed the Penrose check."""


@dataclass(frozen=True)
class PenroseReport:
    """Residuals of the four Penrose conditions for a candidate ``B`` of ``A``."""

    r1: float
    r2: float
    r3: float
    r4: float
    scale: float

    @property
    def worst(self) -> float:
        return max(self.r1, self.r2, self.r3, self.r4)

    def passes(self, tol: float = ACCEPT_TOL) -> bool:
        return self.worst <= tol * self.scale

    def as_dict(self) -> dict[str, float]:
        return {"r1": self.r1, "r2": self.r2, "r3": self.r3, "r4": self.r4, "scale": self.scale}


@dataclass(frozen=True)
class PinvOptions:
    """Knobs shared by the routes.

    ``rank_tol`` is relative to the largest Gram eigenvalue (for the svd route,
    to the largest singular value). ``mu0=None`` means ``1e-2 * ||A||_F**2``.
    """

    route: str = "auto"
    rank_tol: float = RANK_TOL
    mu0: float | None = None
    mu_factor: float = 0.1
    mu_steps: int = 12
    conv_tol: float = 1e-10
    sep_tol: float = 1e-6
    cluster_tol: float = CLUSTER_TOL
    accept_tol: float = ACCEPT_TOL

    def __post_init__(self):
        if self.route not in ROUTES:
            raise ValueError(f"unknown route {self.route!r}; expected one of {', '.join(ROUTES)}")
        if not self.rank_tol > 0:
            raise ValueError("rank_tol must be positive")
        if not 0 < self.mu_factor < 1:
            raise ValueError("mu_factor must lie strictly between 0 and 1")
        if self.mu0 is not None and not self.mu0 > 0:
            raise ValueError("mu0 must be positive")
        if self.mu_steps < 1:
            raise ValueError("mu_steps must be at least 1")


@dataclass(frozen=True)
class PinvResult:
    matrix: ComplexMatrix
    route: str
    report: PenroseReport
    passed: bool
    failures: dict[str, str] = field(default_factory=dict)


def _zero_result(x: np.ndarray) -> ComplexMatrix | None:
    if not x.any():
        return ComplexMatrix._wrap(np.zeros((x.shape[1], x.shape[0]), dtype=np.complex128))
    return None


def verify_penrose(a: Any, b: Any, tol: float = ACCEPT_TOL) -> tuple[PenroseReport, bool]:
    """Residuals of ``ABA = A``, ``BAB = B``, ``(AB)* = AB``, ``(BA)* = BA``.

    The boolean is true when every residual is at most ``tol * scale`` with
    ``scale = max(1, ||A||_F, ||B||_F)``.
    """
    x, y = as_array(a), as_array(b)
    if y.shape != (x.shape[1], x.shape[0]):
        raise ShapeMismatch(
            f"candidate must be {x.shape[1]}x{x.shape[0]} for a {x.shape[0]}x{x.shape[1]} matrix, got {y.shape[0]}x{y.shape[1]}"
        )
    ab, ba = x @ y, y @ x
    report = PenroseReport(
        r1=float(np.linalg.norm(ab @ x - x)),
        r2=float(np.linalg.norm(y @ ab - y)),
        r3=float(np.linalg.norm(ab - ab.conj().T)),
        r4=float(np.linalg.norm(ba - ba.conj().T)),
        scale=max(1.0, float(np.linalg.norm(x)), float(np.linalg.norm(y))),
    )
    return report, report.passes(tol)


def _nonzero_clusters(w: np.ndarray, rank_tol: float, cluster_tol: float):
    """Split descending Gram eigenvalues into clusters above the rank cutoff.

    Returns (values, slices) where values are unnormalised cluster means.
    Clustering runs on eigenvalues divided by the largest one, so it does not
    depend on the scale of A, and the zero cluster never absorbs a kept value.
    """
    top = w[0]
    kept = int(np.count_nonzero(w > rank_tol * top))
    values, mults = distinct_spectrum(w[:kept] / top, cluster_tol)
    slices, start = [], 0
    for k in mults:
        slices.append(slice(start, start + k))
        start += k
    return [v * top for v in values], slices


def _is_hermitian(x: np.ndarray) -> bool:
    return x.shape[0] == x.shape[1] and np.linalg.norm(x - x.conj().T) <= 1e-14 * np.linalg.norm(x)


def _hermitian_spectral(x: np.ndarray, rank_tol: float, cluster_tol: float) -> ComplexMatrix:
    """Hermitian input: A A* = A^2 is diagonalised by the eigenvectors of A itself.

    Each Gram eigenvalue is lambda^2 and ``A* v = lambda v``, so the sum over a
    cluster of ``A* E / lambda^2`` reduces to ``sum v v* / lambda``. Working on
    A instead of A^2 keeps the conditioning at cond(A) rather than cond(A)^2.
    """
    eig = hermitian_eig(x)
    lam = np.array(eig.eigenvalues)
    vecs = eig.vectors.array
    keep = lam**2 > rank_tol * np.max(lam**2)
    values, mults = distinct_spectrum(lam[keep] / np.abs(lam).max(), cluster_tol)
    vecs = vecs[:, keep]
    out = np.zeros_like(x)
    start = 0
    for v, k in zip(values, mults):
        block = vecs[:, start:start + k]
        out += (block @ block.conj().T) / (v * np.abs(lam).max())
        start += k
    return ComplexMatrix._wrap(out)


def _spectral(x: np.ndarray, side: str, rank_tol: float, cluster_tol: float) -> ComplexMatrix:
    zero = _zero_result(x)
    if zero is not None:
        return zero
    if _is_hermitian(x):
        return _hermitian_spectral(x, rank_tol, cluster_tol)
    eig = gram_eig(x, side)
    w = np.array(eig.eigenvalues)
    vecs = eig.vectors.array
    values, slices = _nonzero_clusters(w, rank_tol, cluster_tol)
    weighted = np.zeros((vecs.shape[0], vecs.shape[0]), dtype=np.complex128)
    for alpha, sl in zip(values, slices):
        block = vecs[:, sl]
        weighted += (block @ block.conj().T) / alpha
    xh = x.conj().T
    return ComplexMatrix._wrap(xh @ weighted if side == "AAstar" else weighted @ xh)


def pinv_spectral(a: Any, rank_tol: float = RANK_TOL, cluster_tol: float = CLUSTER_TOL) -> ComplexMatrix:
    """``A+ = sum_a (1/alpha_a) A* E_a`` over the spectral decomposition of ``A A*``."""
    return _spectral(as_array(a), "AAstar", rank_tol, cluster_tol)


def pinv_via_AstarA(a: Any, rank_tol: float = RANK_TOL, cluster_tol: float = CLUSTER_TOL) -> ComplexMatrix:
    """``A+ = sum_b (1/beta_b) F_b A*`` over the spectral decomposition of ``A* A``."""
    return _spectral(as_array(a), "AstarA", rank_tol, cluster_tol)


def _leja_order(nodes: np.ndarray) -> np.ndarray:
    """Reorder interpolation nodes greedily to maximise the product of distances."""
    remaining = list(range(len(nodes)))
    first = max(remaining, key=lambda i: abs(nodes[i]))
    order = [first]
    remaining.remove(first)
    logdist = np.zeros(len(nodes))
    while remaining:
        logdist += np.log(np.abs(nodes - nodes[order[-1]]) + 1e-300)
        nxt = max(remaining, key=lambda i: logdist[i])
        order.append(nxt)
        remaining.remove(nxt)
    return nodes[order]


def pinv_polynomial(
    a: Any,
    rank_tol: float = RANK_TOL,
    *,
    side: str = "auto",
    sep_tol: float = 1e-6,
    cluster_tol: float = CLUSTER_TOL,
    accept_tol: float = ACCEPT_TOL,
) -> ComplexMatrix:
    """Pseudoinverse as a polynomial in a Gram matrix applied to ``A*``.

    Only the eigenvalues of the Gram matrix are used. With distinct nonzero
    eigenvalues ``beta_b`` of ``G = A* A`` the result is ``q(G) A*`` where
    ``q`` interpolates ``1/beta`` at the ``beta_b``; the mirror form on
    ``G = A A*`` is ``A* q(G)``. ``side="auto"`` picks the smaller Gram
    matrix. The interpolant is evaluated in Newton form over Leja-ordered
    nodes, whose divided differences for ``1/x`` have the closed form
    ``(-1)^k / (x_0 ... x_k)``.

    Raises :class:`DegenerateSeparation` when two distinct values are within
    ``sep_tol * beta_max``, and :class:`PolynomialInstability` when the
    evaluated result fails the Penrose check at ``accept_tol``.
    """
    x = as_array(a)
    zero = _zero_result(x)
    if zero is not None:
        return zero
    m, n = x.shape
    if side == "auto":
        side = "AstarA" if n <= m else "AAstar"
    if side not in ("AstarA", "AAstar"):
        raise ValueError(f"unknown Gram side {side!r}")
    w = np.array(gram_eig(x, side, vectors=False))
    top = w[0]
    kept = w[w > rank_tol * top] / top
    values, _ = distinct_spectrum(kept, cluster_tol)
    nodes = np.array(values)
    gaps = -np.diff(nodes)
    if gaps.size and gaps.min() <= sep_tol:
        raise DegenerateSeparation(
            f"Gram eigenvalues {gaps.min() * top:.3e} apart, separation tolerance is {sep_tol * top:.3e}"
        )
    nodes = _leja_order(nodes)
    coeffs = np.cumprod(-1.0 / nodes) * -1.0  # (-1)^k / prod(x_0..x_k)
    xh = x.conj().T
    g = (x.conj().T @ x if side == "AstarA" else x @ x.conj().T) / top
    eye = np.eye(g.shape[0])
    acc = coeffs[-1] * eye
    for k in range(len(nodes) - 2, -1, -1):
        acc = (g - nodes[k] * eye) @ acc + coeffs[k] * eye
    acc = acc / top
    result = acc @ xh if side == "AstarA" else xh @ acc
    report, ok = verify_penrose(x, result, accept_tol)
    if not ok:
        raise PolynomialInstability(
            f"polynomial evaluation over {len(nodes)} nodes is unstable (worst Penrose residual {report.worst:.3e})"
        )
    return ComplexMatrix._wrap(result)


def regularized_inverse(a: Any, mu: float, rhs: Any | None = None, form: str = "augmented") -> ComplexMatrix:
    """The regularized operator ``X(mu) = A*(A A* + mu)^-1``, optionally applied to ``rhs``.

    ``form="augmented"`` solves the Hermitian system
    ``[[mu*1, A], [A*, -1]] [Y; X] = [1; 0]``, which never forms a Gram
    matrix. ``"AAstar"`` and ``"AstarA"`` use the two Gram-side formulas
    ``A* solve(A A* + mu, 1)`` and ``solve(A* A + mu, A*)``.
    """
    x = as_array(a)
    m, n = x.shape
    b = np.eye(m, dtype=np.complex128) if rhs is None else as_array(rhs)
    if b.shape[0] != m:
        raise ShapeMismatch(f"right-hand side has {b.shape[0]} rows, expected {m}")
    if not mu > 0:
        raise ValueError("mu must be positive")
    tiny = np.finfo(float).tiny
    if form == "augmented":
        k = np.zeros((m + n, m + n), dtype=np.complex128)
        k[:m, :m] = mu * np.eye(m)
        k[:m, m:] = x
        k[m:, :m] = x.conj().T
        k[m:, m:] = -np.eye(n)
        stacked = np.zeros((m + n, b.shape[1]), dtype=np.complex128)
        stacked[:m] = b
        out = _solve(k, stacked, pivot_tol=tiny)[m:]
    elif form == "AAstar":
        out = x.conj().T @ _solve(x @ x.conj().T + mu * np.eye(m), b, pivot_tol=tiny)
    elif form == "AstarA":
        out = _solve(x.conj().T @ x + mu * np.eye(n), x.conj().T @ b, pivot_tol=tiny)
    else:
        raise ValueError(f"unknown form {form!r}")
    return ComplexMatrix._wrap(out)


@dataclass(frozen=True)
class TikhonovStep:
    """One point of the regularization schedule.

    ``regularized`` is ``X(mu)``; ``sandwich`` is ``X(mu) A X(mu)``, which
    converges to ``A+`` at the same O(mu) rate but is insensitive to rounding
    noise in the null space; ``estimate`` is the Richardson-extrapolated
    limit built from the sandwich iterates seen so far.
    """

    mu: float
    regularized: ComplexMatrix
    sandwich: ComplexMatrix
    estimate: ComplexMatrix


def _schedule(x: np.ndarray, opts: PinvOptions) -> np.ndarray:
    mu0 = opts.mu0 if opts.mu0 is not None else 1e-2 * float(np.linalg.norm(x)) ** 2
    return mu0 * opts.mu_factor ** np.arange(opts.mu_steps)


def tikhonov_path(a: Any, opts: PinvOptions | None = None, depth: int = 3) -> Iterator[TikhonovStep]:
    """Walk the geometric mu schedule, yielding every regularized iterate.

    The extrapolation table eliminates error terms of order mu, mu^2, ...,
    mu^depth: ``R[k][j] = (R[k][j-1] - q^j R[k-1][j-1]) / (1 - q^j)``.
    """
    opts = opts or PinvOptions()
    x = as_array(a)
    q = opts.mu_factor
    prev_row: list[np.ndarray] = []
    for mu in _schedule(x, opts):
        reg = regularized_inverse(x, mu).array
        sandwich = reg @ x @ reg
        row = [sandwich]
        for j in range(1, min(depth, len(prev_row)) + 1):
            row.append((row[j - 1] - q**j * prev_row[j - 1]) / (1.0 - q**j))
        prev_row = row
        yield TikhonovStep(float(mu), ComplexMatrix._wrap(reg), ComplexMatrix._wrap(sandwich), ComplexMatrix._wrap(row[-1]))


def pinv_tikhonov(a: Any, opts: PinvOptions | None = None) -> ComplexMatrix:
    """Pseudoinverse as the ``mu -> 0`` limit of the regularized inverse.

    Stops once successive extrapolated estimates agree to ``conv_tol``
    relative; raises :class:`NoConvergence` if the schedule runs out first.
    """
    opts = opts or PinvOptions()
    x = as_array(a)
    zero = _zero_result(x)
    if zero is not None:
        return zero
    previous = None
    change = float("inf")
    for step in tikhonov_path(x, opts):
        current = step.estimate.array
        if previous is not None:
            change = float(np.linalg.norm(current - previous))
            if change <= opts.conv_tol * float(np.linalg.norm(current)):
                return step.estimate
        previous = current
    raise NoConvergence(
        f"Tikhonov iterates still changing by {change:.3e} after {opts.mu_steps} steps"
    )


def pinv_svd(a: Any, rank_tol: float = RANK_TOL) -> ComplexMatrix:
    """``W S+ V*`` from the SVD; rectangular input goes through the square embedding.

    Singular values at or below ``rank_tol * s_max`` count as zero.
    """
    x = as_array(a)
    zero = _zero_result(x)
    if zero is not None:
        return zero
    m, n = x.shape
    square = x if m == n else embed_square(x)[0].array
    f = svd_square(square)
    s = np.real(np.diag(f.S.array))
    inv = np.where(s > rank_tol * s[0], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    full = (f.W.array * inv) @ f.V.array.conj().T
    return ComplexMatrix._wrap(full[:n, :m])


def pinv_fullrank(a: Any, which: str = "auto") -> ComplexMatrix:
    """Closed forms ``A*(A A*)^-1`` (which="rows") or ``(A* A)^-1 A*`` (which="cols").

    ``which="auto"`` picks the smaller Gram matrix. A singular Gram matrix
    raises :class:`SingularMatrix`.
    """
    x = as_array(a)
    m, n = x.shape
    if which == "auto":
        which = "rows" if m <= n else "cols"
    xh = x.conj().T
    if which == "rows":
        return ComplexMatrix._wrap(xh @ _solve(x @ xh, np.eye(m, dtype=np.complex128)))
    if which == "cols":
        return ComplexMatrix._wrap(_solve(xh @ x, xh))
    raise ValueError(f"which must be 'rows', 'cols' or 'auto', got {which!r}")


def _run_route(route: str, x: np.ndarray, opts: PinvOptions) -> ComplexMatrix:
    if route == "spectral":
        return pinv_spectral(x, opts.rank_tol, opts.cluster_tol)
    if route == "via_AstarA":
        return pinv_via_AstarA(x, opts.rank_tol, opts.cluster_tol)
    if route == "polynomial":
        return pinv_polynomial(
            x, opts.rank_tol, sep_tol=opts.sep_tol, cluster_tol=opts.cluster_tol, accept_tol=opts.accept_tol
        )
    if route == "tikhonov":
        return pinv_tikhonov(x, opts)
    if route == "svd":
        return pinv_svd(x, opts.rank_tol)
    if route == "fullrank":
        if not x.any():
            return _zero_result(x)
        return pinv_fullrank(x)
    raise ValueError(f"unknown route {route!r}")


def pinv(a: Any, opts: PinvOptions | None = None) -> PinvResult:
    """Moore-Penrose pseudoinverse with a Penrose verification report.

    ``route="auto"`` tries the closed full-rank form first and falls back to
    the spectral route when the Gram matrix is singular or the closed form
    fails verification. :class:`RouteFailed` is raised only when no attempted
    route produced a matrix.
    """
    opts = opts or PinvOptions()
    x = as_array(a)
    chain = ["fullrank", "spectral"] if opts.route == "auto" else [opts.route]
    failures: dict[str, BaseException] = {}
    last = None
    for route in chain:
        try:
            candidate = _run_route(route, x, opts)
        except NumericalError as exc:
            failures[route] = exc
            continue
        report, ok = verify_penrose(x, candidate, opts.accept_tol)
        last = PinvResult(candidate, route, report, ok, {k: str(v) for k, v in failures.items()})
        if ok:
            return last
        failures[route] = NumericalError(f"Penrose check failed (worst residual {report.worst:.3e})")
    if last is not None:
        return last
    detail = "; ".join(f"{k}: {v}" for k, v in failures.items())
    raise RouteFailed(f"pinv failed on every route ({detail})", failures)
