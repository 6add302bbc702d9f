"""Reference computations that share no code with the package."""

import numpy as np


def triple_loop_matmul(a, b):
    m, k = a.shape
    _, n = b.shape
    out = np.zeros((m, n), dtype=complex)
    for i in range(m):
        for j in range(n):
            s = 0j
            for t in range(k):
                s += a[i, t] * b[t, j]
            out[i, j] = s
    return out


def horner_matrix(coeffs, a):
    """p(A) for coefficients listed highest degree first."""
    out = np.zeros_like(a, dtype=complex)
    eye = np.eye(a.shape[0])
    for c in coeffs:
        out = out @ a + c * eye
    return out


def hermitian_2x2_eigenvalues(h):
    a, d, b = h[0, 0].real, h[1, 1].real, h[0, 1]
    mean, rad = (a + d) / 2, np.sqrt(((a - d) / 2) ** 2 + abs(b) ** 2)
    return mean + rad, mean - rad


def lapack_pinv(a):
    return np.linalg.pinv(a, rcond=1e-10, hermitian=False)


def penrose_worst(a, b):
    ab, ba = a @ b, b @ a
    return max(
        np.linalg.norm(ab @ a - a),
        np.linalg.norm(b @ ab - b),
        np.linalg.norm(ab - ab.conj().T),
        np.linalg.norm(ba - ba.conj().T),
    )
