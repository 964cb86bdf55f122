from math import acos, pi, sqrt

import numpy as np
import pytest

from heraldic import (
    CircuitSpec,
    DimensionError,
    InvalidCircuitError,
    PhaseLayer,
    TwoModeElement,
    canonicalize,
    clements_decompose,
    compose,
    count_nontrivial,
    element_matrix,
    phase_element,
    rho_distance,
)
from heraldic.schemes import ghz_scheme
from tests.utils import random_unitary


def test_trivial_element_is_identity():
    assert np.allclose(element_matrix(TwoModeElement(0, 0, (0, 1)), 3), np.eye(3))


def test_swap_element():
    matrix = element_matrix(TwoModeElement(pi / 2, 0, (0, 1)), 2)
    assert np.allclose(matrix, [[0, -1], [1, 0]])


def test_third_element():
    matrix = element_matrix(TwoModeElement(acos(1 / sqrt(3)), 0, (1, 2)), 3)
    assert np.allclose(matrix[1:, 1:], [[1 / sqrt(3), -sqrt(2 / 3)], [sqrt(2 / 3), 1 / sqrt(3)]])


def test_element_matrices_are_unitary():
    rng = np.random.default_rng(4)
    for _ in range(50):
        element = TwoModeElement(rng.uniform(0, pi / 2), rng.uniform(-pi, pi), (3, 1))
        matrix = element_matrix(element, 5)
        assert np.linalg.norm(matrix.conj().T @ matrix - np.eye(5)) < 1e-14


def test_element_validation():
    with pytest.raises(InvalidCircuitError):
        TwoModeElement(0.1, 0, (1, 1))
    with pytest.raises(InvalidCircuitError):
        TwoModeElement(2.0, 0, (0, 1))
    with pytest.raises(InvalidCircuitError):
        TwoModeElement(0.1, 4.0, (0, 1))
    with pytest.raises(DimensionError):
        element_matrix(TwoModeElement(0.1, 0, (0, 3)), 3)
    with pytest.raises(DimensionError):
        CircuitSpec(2, (TwoModeElement(0.1, 0, (0, 2)),), PhaseLayer.identity(2))
    with pytest.raises(InvalidCircuitError):
        PhaseLayer((1, 2))


def test_phase_element():
    element = phase_element(2, 3 * pi / 2, 0)
    assert element.theta == 0
    assert element.phi == pytest.approx(-pi / 2)
    assert np.allclose(np.diag(element_matrix(element, 3)), [1, 1, -1j])


def test_compose_empty_and_single():
    assert np.array_equal(compose(CircuitSpec(4, (), PhaseLayer.identity(4))), np.eye(4))
    spec = CircuitSpec(2, (TwoModeElement(pi / 4, 0, (0, 1)),), PhaseLayer.identity(2))
    assert np.allclose(compose(spec), np.array([[1, -1], [1, 1]]) / sqrt(2))


def test_compose_order():
    first = TwoModeElement(0.3, 0.2, (0, 1))
    second = TwoModeElement(0.7, -1.0, (1, 2))
    phases = PhaseLayer.from_angles([0.1, 0.2, 0.3])
    spec = CircuitSpec(3, (first, second), phases)
    expected = np.diag(phases.as_array()) @ element_matrix(first, 3) @ element_matrix(second, 3)
    assert np.allclose(compose(spec), expected)
    physical = CircuitSpec.from_physical_order(3, [second, first], phases)
    assert physical == spec


def test_circuit_json_round_trip():
    spec = ghz_scheme()
    assert np.allclose(compose(CircuitSpec.from_json(spec.to_json())), compose(spec))


def test_circuit_json_errors():
    with pytest.raises(DimensionError):
        CircuitSpec.from_json({"elements": []})
    with pytest.raises(InvalidCircuitError):
        CircuitSpec.from_json({"dim": 2, "elements": [{"theta": 0.1}]})


def test_count_nontrivial():
    assert count_nontrivial(clements_decompose(np.eye(5))) == 0
    assert count_nontrivial(ghz_scheme()) == 12
    spec = CircuitSpec(2, (TwoModeElement(pi / 4, 0, (0, 1)),), PhaseLayer.identity(2))
    assert count_nontrivial(spec) == 1
    with pytest.raises(ValueError):
        count_nontrivial(spec, 0)


def test_rho_distance():
    u = random_unitary(np.random.default_rng(6), 4)
    assert rho_distance(u, u) == pytest.approx(0, abs=1e-14)
    assert rho_distance(u, -u) == pytest.approx(2)
    assert rho_distance(np.eye(2), np.diag([1, -1])) == pytest.approx(1)
    with pytest.raises(DimensionError):
        rho_distance(np.eye(2), np.eye(3))


def test_canonicalize_keeps_the_unitary():
    rng = np.random.default_rng(12)
    blocks = [
        (float(rng.uniform(-5, 5)), float(rng.uniform(-5, 5)), modes)
        for modes in [(0, 1), (2, 3), (1, 2), (0, 1), (2, 3), (1, 2)]
    ]
    phases = np.exp(1j * rng.uniform(-pi, pi, 4))
    spec = canonicalize(4, blocks, phases)

    expected = np.eye(4, dtype=np.complex128)
    for theta, phi, (n, m) in blocks:
        c, s = np.cos(theta), np.sin(theta)
        block = np.eye(4, dtype=np.complex128)
        block[np.ix_((n, m), (n, m))] = [[np.exp(1j * phi) * c, -s], [np.exp(1j * phi) * s, c]]
        expected = expected @ block
    expected = np.diag(phases) @ expected

    assert np.allclose(compose(spec), expected, atol=1e-12)
    assert all(0 <= e.theta <= pi / 2 for e in spec.elements)
