import numpy as np
import pytest


def crandn(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def rank_deficient(rng, m, n, r):
    return crandn(rng, m, r) @ crandn(rng, r, n)


def random_hermitian(rng, n):
    x = crandn(rng, n, n)
    return x + x.conj().T


def random_unitary(rng, n):
    q, r = np.linalg.qr(crandn(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


EXAMPLE_1 = np.array([[2, 0, 1j], [0, 1j, 1]])
EXAMPLE_1_PINV = np.array([[4, -2j], [1, -5j], [-1j, 4]]) / 9
EXAMPLE_2 = np.array([[1, 2], [0, 1j], [0, 3]])
EXAMPLE_2_PINV = np.array([[10, 2j, -6], [0, -1j, 3]]) / 10


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
