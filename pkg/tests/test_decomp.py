import numpy as np
import pytest

from mpinv import NotPSD, gram_eig, polar, polar_left, singular_values, sqrt_psd, svd_rect, svd_square

from conftest import EXAMPLE_1, crandn, rank_deficient, random_unitary


def test_sqrt_of_diagonal():
    assert np.allclose(sqrt_psd(np.eye(3)).array, np.eye(3))
    assert np.allclose(sqrt_psd(np.diag([4.0, 9.0])).array, np.diag([2, 3]))


def test_sqrt_squares_back(rng):
    a = crandn(rng, 7, 5)
    h = a.conj().T @ a
    r = sqrt_psd(h).array
    assert np.linalg.norm(r @ r - h) <= 1e-9 * np.linalg.norm(h)
    assert np.linalg.norm(r - r.conj().T) <= 1e-12 * np.linalg.norm(r)


def test_sqrt_rejects_negative_spectrum():
    with pytest.raises(NotPSD):
        sqrt_psd(np.diag([1.0, -1.0]))


def test_polar_of_unitary(rng):
    u = random_unitary(rng, 4)
    f = polar(u)
    assert np.allclose(f.unitary.array, u, atol=1e-12)
    assert np.allclose(f.psd_factor.array, np.eye(4), atol=1e-12)


def test_polar_of_real_diagonal():
    f = polar(np.diag([-2.0, 3.0]))
    assert np.allclose(f.unitary.array, np.diag([-1, 1]))
    assert np.allclose(f.psd_factor.array, np.diag([2, 3]))


def test_polar_of_nilpotent_completes_basis():
    a = np.array([[0, 1], [0, 0]])
    f = polar(a)
    u = f.unitary.array
    assert np.allclose(f.psd_factor.array, np.diag([0, 1]))
    assert np.linalg.norm(u.conj().T @ u - np.eye(2)) <= 1e-12
    assert np.linalg.norm(f.reconstruct().array - a) <= 1e-10


def test_polar_when_canonical_candidates_are_all_short():
    # Ran(A) misses (1,...,1); every e_j has residual 1/sqrt(n) < 0.5
    n = 9
    v = np.ones(n) / np.sqrt(n)
    a = np.eye(n) - np.outer(v, v)
    f = polar(a)
    u = f.unitary.array
    assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-12
    assert np.linalg.norm(f.reconstruct().array - a) <= 1e-12


def check_polar(a):
    f = polar(a)
    u, p = f.unitary.array, f.psd_factor.array
    n = a.shape[0]
    assert np.linalg.norm(u.conj().T @ u - np.eye(n)) <= 1e-10
    assert np.linalg.norm(u @ p - a) <= 1e-9 * np.linalg.norm(a)
    assert np.linalg.norm(p - p.conj().T) <= 1e-10 * np.linalg.norm(p)
    assert np.linalg.eigvalsh(p).min() >= -1e-10 * np.linalg.norm(p)


@pytest.mark.parametrize("n, rank", [(3, 3), (8, 5), (20, 20), (35, 10), (50, 49)])
def test_polar_random(rng, n, rank):
    check_polar(rank_deficient(rng, n, n, rank) if rank < n else crandn(rng, n, n))


def test_polar_left(rng):
    a = crandn(rng, 6, 6)
    f = polar_left(a)
    v, p = f.unitary.array, f.psd_factor.array
    assert np.linalg.norm(p @ v - a) <= 1e-10 * np.linalg.norm(a)
    assert np.linalg.norm(p @ p - a @ a.conj().T) <= 1e-10 * np.linalg.norm(a) ** 2


def test_polar_unitary_is_unique_for_invertible_input(rng):
    a = crandn(rng, 10, 10)
    u0 = polar(a).unitary.array
    for seed in range(3):
        order = np.random.default_rng(seed).permutation(10)
        assert np.linalg.norm(polar(a, order=order).unitary.array - u0) <= 1e-8


def test_modulus_determinant(rng):
    for n in range(1, 9):
        a = crandn(rng, n, n)
        p = polar(a).psd_factor.array
        assert abs(np.linalg.det(p) - abs(np.linalg.det(a))) <= 1e-8 * abs(np.linalg.det(a))


def test_svd_square_examples():
    f = svd_square(np.diag([3.0, -4.0]))
    assert f.values == (4.0, 3.0)
    assert np.allclose(f.reconstruct().array, np.diag([3, -4]))
    z = svd_square(np.zeros((3, 3)))
    assert z.values == (0.0, 0.0, 0.0)
    assert np.array_equal(z.V.array, np.eye(3)) and np.array_equal(z.W.array, np.eye(3))


def check_svd(a, f):
    v, s, w = f.V.array, f.S.array, f.W.array
    k = v.shape[0]
    vals = np.real(np.diag(s))
    assert np.linalg.norm(v.conj().T @ v - np.eye(k)) <= 1e-9
    assert np.linalg.norm(w.conj().T @ w - np.eye(k)) <= 1e-9
    assert np.count_nonzero(s - np.diag(np.diag(s))) == 0
    assert np.all(vals >= 0) and np.all(np.diff(vals) <= 0)
    assert np.linalg.norm(f.reconstruct().array - a) <= 1e-9 * max(1.0, np.linalg.norm(a))


@pytest.mark.parametrize("n", [1, 6, 25, 50])
def test_svd_square_random(rng, n):
    a = crandn(rng, n, n)
    f = svd_square(a)
    check_svd(a, f)
    assert np.abs(np.array(f.values) - singular_values(a)).max() <= 1e-9 * np.linalg.norm(a)


@pytest.mark.parametrize("m, n", [(1, 2), (4, 7), (30, 12), (40, 40), (23, 40)])
def test_svd_rect_random(rng, m, n):
    a = crandn(rng, m, n)
    f = svd_rect(a)
    assert f.shape.rows == m and f.shape.cols == n
    check_svd(a, f)
    k = min(m, n)
    assert np.abs(np.array(f.values[:k]) - singular_values(a)).max() <= 1e-9 * np.linalg.norm(a)
    assert max(f.values[k:], default=0.0) <= 1e-12 * np.linalg.norm(a)


def test_svd_rect_examples():
    assert np.allclose(svd_rect([[3, 4]]).values, (5, 0, 0), atol=1e-12)
    expected = np.sqrt([(7 + np.sqrt(13)) / 2, (7 - np.sqrt(13)) / 2])
    assert np.allclose(svd_rect(EXAMPLE_1).values[:2], expected, atol=1e-13)
    assert svd_rect(np.zeros((2, 3))).values == (0.0,) * 5


def test_singular_values_examples(rng):
    assert np.allclose(singular_values(random_unitary(rng, 5)), np.ones(5))
    assert np.allclose(singular_values([[3, 4]]), [5])
    a = crandn(rng, 3, 5)
    small = gram_eig(a, "AAstar", vectors=False)
    big = gram_eig(a, "AstarA", vectors=False)
    assert np.abs(np.array(small) - big[:3]).max() <= 1e-9 * np.linalg.norm(a) ** 2
    assert max(big[3:]) <= 1e-12 * np.linalg.norm(a) ** 2
    assert np.abs(np.array(singular_values(a)) - singular_values(a.conj().T)).max() <= 1e-9


def test_singular_values_match_lapack(rng):
    a = crandn(rng, 9, 4)
    assert np.allclose(singular_values(a), np.linalg.svd(a, compute_uv=False), atol=1e-12)
