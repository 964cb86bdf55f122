import numpy as np
import pytest

from heraldic import (
    CayleyChart,
    DimensionError,
    NotHermitianError,
    cayley_pullback,
    chart_point,
    hermitian_from_vector,
    hermitian_to_vector,
)
from tests.utils import finite_difference, random_complex, random_hermitian, random_unitary


def test_zero_coordinate_is_the_base():
    u = random_unitary(np.random.default_rng(0), 4)
    assert np.array_equal(chart_point(CayleyChart.at(u)), u)


def test_scalar_chart():
    for h in [-100.0, -1.0, 0.3, 7.0]:
        (value,) = chart_point(CayleyChart(np.eye(1), np.array([[h]]))).ravel()
        assert value == pytest.approx((1j - h) / (1j + h))
        assert abs(value) == pytest.approx(1)


def test_chart_points_are_unitary():
    rng = np.random.default_rng(1)
    for scale in [1e-3, 1.0, 1e3]:
        h = random_hermitian(rng, 4, scale)
        u = CayleyChart(random_unitary(rng, 4), h).point()
        assert np.linalg.norm(u.conj().T @ u - np.eye(4)) < 1e-12


def test_chart_is_locally_injective():
    rng = np.random.default_rng(2)
    base = random_unitary(rng, 3)
    first = chart_point(CayleyChart(base, random_hermitian(rng, 3, 1e-3)))
    second = chart_point(CayleyChart(base, random_hermitian(rng, 3, 1e-3)))
    assert np.linalg.norm(first - second) > 0


def test_vector_layout():
    matrix = hermitian_from_vector(np.arange(9.0), 3)
    assert np.allclose(np.diag(matrix), [0, 1, 2])
    assert matrix[0, 1] == 3 + 6j
    assert matrix[0, 2] == 4 + 7j
    assert matrix[1, 2] == 5 + 8j
    assert np.allclose(matrix, matrix.conj().T)
    assert np.allclose(hermitian_to_vector(matrix), np.arange(9.0))


def test_vector_size_mismatch():
    with pytest.raises(DimensionError):
        hermitian_from_vector(np.zeros(8), 3)


def test_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        CayleyChart(np.eye(2), np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionError):
        CayleyChart(np.eye(2), np.zeros((3, 3)))


def test_pullback_matches_finite_differences():
    rng = np.random.default_rng(3)
    base = random_unitary(rng, 3)
    gamma = random_complex(rng, (3, 3))

    def f(vector):
        u = CayleyChart.from_vector(base, vector).point()
        return float(2 * np.real(np.sum(gamma * u)))

    for _ in range(5):
        x = rng.standard_normal(9)
        chart = CayleyChart.from_vector(base, x)
        analytic = cayley_pullback(chart, gamma)
        numeric = finite_difference(f, x)
        assert np.max(np.abs(analytic - numeric)) < 1e-6 * max(1.0, np.max(np.abs(analytic)))
