from math import sqrt

import numpy as np
import pytest

from heraldic import DimensionError, NotUnitaryError
from heraldic.schemes import omega_block, omega_coefficients, omega_prime_block


def test_blocks_are_unitary():
    for block in (omega_block(), omega_prime_block()):
        assert np.linalg.norm(block.conj().T @ block - np.eye(3)) < 1e-14


def test_omega_coefficients():
    c = omega_coefficients(omega_block())
    assert c.alpha == pytest.approx(1 / sqrt(3))
    assert c.A == pytest.approx(1 / 6)
    assert np.allclose(c.beta, [-sqrt(2 / 3), 0])
    assert np.allclose(c.B, [1 / (6 * sqrt(2)), 1 / (2 * sqrt(6))])
    assert np.allclose(c.C, [1 / 12, 1 / sqrt(12), 1 / 4])


def test_omega_prime_coefficients():
    c = omega_coefficients(omega_prime_block())
    assert c.alpha == pytest.approx(1 / sqrt(3))
    assert c.A == pytest.approx(1 / 6)
    assert np.allclose(c.beta, [1 / sqrt(2), 1 / sqrt(6)])
    assert np.allclose(c.B, [-1 / (2 * sqrt(6)), 1 / (6 * sqrt(2))])


def test_omega_prime_first_row():
    assert np.allclose(omega_prime_block()[0], [1 / sqrt(2), -1 / sqrt(2), 0])


def test_blocks_differ_by_a_thirty_degree_element():
    omega, prime = omega_block(), omega_prime_block()
    assert np.allclose(omega[2], prime[2])
    rotation = omega[:2] @ prime[:2].conj().T
    assert np.allclose(rotation.imag, 0)
    assert np.allclose(rotation @ rotation.T, np.eye(2))
    assert abs(rotation[0, 0]) == pytest.approx(sqrt(3) / 2)
    assert abs(rotation[0, 1]) == pytest.approx(1 / 2)


def test_two_photon_form():
    c = omega_coefficients(omega_block())
    cross = np.array([c.B[0] * c.beta[0], c.B[0] * c.beta[1] + c.B[1] * c.beta[0], 0])
    cross[2] = c.B[1] * c.beta[1]
    assert np.allclose(c.Dq, c.alpha * c.C + 2 * cross)


def test_validation():
    with pytest.raises(DimensionError):
        omega_coefficients(np.eye(4))
    with pytest.raises(NotUnitaryError):
        omega_coefficients(np.ones((3, 3)))
