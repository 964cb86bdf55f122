from math import pi

import numpy as np
import pytest

from heraldic import (
    CircuitSpec,
    ConfigError,
    CostParams,
    PhaseLayer,
    TwoModeElement,
    cost_terms,
    simplicity_cost,
)
from tests.utils import finite_difference


def _single(theta, phi, phases=None):
    return CircuitSpec(
        2, (TwoModeElement(theta, phi, (0, 1)),), phases or PhaseLayer.identity(2)
    )


def test_trivial_circuits_cost_nothing():
    elements = (
        TwoModeElement(0, 0, (0, 1)),
        TwoModeElement(pi / 2, pi, (1, 2)),
        TwoModeElement(pi / 2, -pi, (0, 1)),
    )
    spec = CircuitSpec(3, elements, PhaseLayer.identity(3))
    assert simplicity_cost(spec) == pytest.approx(0, abs=1e-12)


def test_balanced_splitter():
    assert simplicity_cost(_single(pi / 4, 0)) == pytest.approx(2)


def test_phase_term():
    assert simplicity_cost(_single(0, pi / 2), CostParams(0.01, 0.01)) == pytest.approx(0.02)


def test_output_phase_term():
    phases = PhaseLayer((1, -1))
    assert simplicity_cost(_single(0, 0, phases), CostParams(0, 0.5)) == pytest.approx(2)


def test_cost_is_non_negative():
    rng = np.random.default_rng(0)
    for _ in range(50):
        spec = _single(rng.uniform(0, pi / 2), rng.uniform(-pi, pi))
        assert simplicity_cost(spec) >= 0


def test_cost_terms_gradient():
    rng = np.random.default_rng(1)
    params = CostParams(0.3, 0.7)
    x = rng.uniform(-3, 3, 7)

    def f(v):
        return cost_terms(v[:3], v[3:5], v[5:], params)[0]

    _, d_theta, d_phi, d_delta = cost_terms(x[:3], x[3:5], x[5:], params)
    analytic = np.concatenate([d_theta, d_phi, d_delta])
    assert np.allclose(analytic, finite_difference(f, x), atol=1e-8)


def test_cost_terms_agree_with_the_circuit_cost():
    params = CostParams(0.2, 0.4)
    angles = np.array([0.4, -1.3])
    spec = _single(0.6, 1.1, PhaseLayer.from_angles(angles))
    value = cost_terms([0.6], [1.1], angles, params)[0]
    assert value == pytest.approx(simplicity_cost(spec, params))


def test_negative_weights():
    with pytest.raises(ConfigError):
        CostParams(epsilon=-1)
