import math

import numpy as np
import pytest

from unruh_otto import (
    DetectorSpec,
    DimensionMismatch,
    DomainError,
    energy,
    hamiltonian,
    initial_state,
    is_valid_state,
    monopole,
    shift_matrix,
)


def test_hamiltonian_examples():
    np.testing.assert_array_equal(hamiltonian(1, 1.7), np.diag([1.7, 0]))
    np.testing.assert_array_equal(hamiltonian(3, 2), np.diag([2, 2, 2, 0]))
    for n in range(1, 6):
        assert np.trace(hamiltonian(n, 0.7)) == pytest.approx(n * 0.7)


def test_monopole_examples():
    np.testing.assert_array_equal(monopole(1), [[0, 1], [1, 0]])
    m4 = monopole(4)
    assert np.all(m4[:4, 4] == 0.5) and np.all(m4[4, :4] == 0.5)
    assert np.all(m4[:4, :4] == 0) and m4[4, 4] == 0
    for n in range(1, 9):
        ground = np.zeros(n + 1)
        ground[-1] = 1
        assert np.linalg.norm(monopole(n) @ ground) == pytest.approx(1, abs=1e-14)


@pytest.mark.parametrize("n", range(1, 9))
def test_monopole_spectrum(n):
    eig = np.sort(np.linalg.eigvalsh(monopole(n)))
    expected = np.sort([1.0, -1.0] + [0.0] * (n - 1))
    np.testing.assert_allclose(eig, expected, atol=1e-12)


def test_initial_state_examples():
    np.testing.assert_allclose(initial_state(1, 0.5), np.diag([0.5, 0.5]))
    np.testing.assert_allclose(initial_state(2, 0.6), np.diag([0.3, 0.3, 0.4]))
    for n in (1, 3, 9):
        assert np.trace(initial_state(n, 0.37)) == pytest.approx(1, abs=1e-15)


def test_shift_matrix_examples():
    np.testing.assert_allclose(shift_matrix(1, 0.2), 0.2 * np.array([[1, 0], [0, -1]]))
    for n in range(1, 8):
        for d in (-0.3, 0.0, 0.01):
            assert abs(np.trace(shift_matrix(n, d))) < 1e-12
            assert energy(shift_matrix(n, d), hamiltonian(n, 1.3)) == pytest.approx(1.3 * d, abs=1e-12)


def test_energy_examples():
    for n in (1, 2, 5):
        assert energy(initial_state(n, 0.4), hamiltonian(n, 2.0)) == pytest.approx(0.8)
        assert energy(np.eye(n + 1) / (n + 1), hamiltonian(n, 2.0)) == pytest.approx(2.0 * n / (n + 1))


def test_energy_linearity():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        A, B = rng.normal(size=(2, n + 1, n + 1))
        H = hamiltonian(n, rng.uniform(0.1, 5))
        assert energy(A + B, H) == pytest.approx(energy(A, H) + energy(B, H), abs=1e-14 * 10)


def test_energy_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        energy(initial_state(2, 0.5), hamiltonian(3, 1.0))


def test_shifted_state_validity_bounds():
    # the uniform excited vector carries p/n + d, the ground state 1 - p - d,
    # so rho_in + shift is a state iff -p/n <= d <= 1 - p
    for n, p in [(1, 0.5), (3, 0.4), (6, 0.9)]:
        rho = initial_state(n, p)
        for d in np.linspace(-1, 1, 401):
            expected = -p / n - 1e-13 <= d <= 1 - p + 1e-13
            assert is_valid_state(rho + shift_matrix(n, d)) == expected, (n, p, d)


@pytest.mark.parametrize("fn", [
    lambda: hamiltonian(0, 1), lambda: hamiltonian(2, 0), lambda: monopole(1.5),
    lambda: initial_state(2, 1.2), lambda: shift_matrix(0, 0.1),
    lambda: DetectorSpec(1, 2.0, 1.0), lambda: DetectorSpec(1, 1.0, 2.0, g=0),
    lambda: DetectorSpec(True, 1.0, 2.0),
])
def test_domain_errors(fn):
    with pytest.raises(DomainError):
        fn()
