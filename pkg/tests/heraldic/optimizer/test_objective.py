from dataclasses import replace

import numpy as np
import pytest

from heraldic import (
    ConfigError,
    DimensionError,
    FockState,
    HeraldConstraint,
    TargetState,
    compose,
    evaluate_constraints,
    herald_analysis,
    hermitian_from_vector,
    relaxed_objective,
    stage1_objective,
)
from heraldic.schemes import ghz_problem, ghz_scheme
from tests.utils import finite_difference, random_unitary, toy_problem


def test_value_matches_the_herald_report():
    u = compose(ghz_scheme())
    spec = ghz_problem()
    report = herald_analysis(u, spec)
    value, _ = stage1_objective(np.zeros(100), u, spec, 4)
    expected = report.probabilities @ (report.overlaps**4).sum(axis=0)
    assert value == pytest.approx(expected, rel=1e-12)
    assert value >= 1 / 54 - 1e-12


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(21)
    spec = toy_problem()
    for _ in range(10):
        base = random_unitary(rng, 4)
        x = 0.3 * rng.standard_normal(16)
        _, analytic = stage1_objective(x, base, spec, 3)
        numeric = finite_difference(lambda v: stage1_objective(v, base, spec, 3)[0], x, 1e-5)
        scale = max(1e-3, np.max(np.abs(analytic)))
        assert np.max(np.abs(analytic - numeric)) / scale < 1e-6


def test_hermitian_coordinate():
    rng = np.random.default_rng(5)
    spec = toy_problem()
    base = random_unitary(rng, 4)
    x = rng.standard_normal(16)
    by_vector = stage1_objective(x, base, spec, 2)
    by_matrix = stage1_objective(hermitian_from_vector(x, 4), base, spec, 2)
    assert by_vector[0] == pytest.approx(by_matrix[0])
    assert np.allclose(by_vector[1], by_matrix[1])


def test_off_sector_targets_contribute_nothing():
    spec = replace(toy_problem(), targets=(TargetState(((FockState((1, 1)), 1.0),), "pair"),))
    u = random_unitary(np.random.default_rng(2), 4)
    value, weights = relaxed_objective(u, spec, 4)
    assert value == 0
    assert not np.any(weights)


def test_no_targets():
    spec = replace(toy_problem(), targets=())
    value, gradient = stage1_objective(np.zeros(16), np.eye(4), spec, 4)
    assert value == 0
    assert not np.any(gradient)


def test_argument_validation():
    with pytest.raises(ConfigError):
        stage1_objective(np.zeros(16), np.eye(4), toy_problem(), 0)
    with pytest.raises(DimensionError):
        stage1_objective(np.zeros(9), np.eye(3), toy_problem(), 4)


def test_constraints_on_the_ghz_scheme():
    u = compose(ghz_scheme())
    spec = ghz_problem()
    report = herald_analysis(u, spec)
    constraints = [
        HeraldConstraint(a, int(np.argmax(report.overlaps[:, a])), 1 / 108) for a in (0, 1)
    ]
    values = evaluate_constraints(u, spec, constraints)
    assert np.allclose(values.probabilities, 1 / 108)
    assert np.allclose(values.fidelities, 1)


def test_target_order_does_not_matter():
    rng = np.random.default_rng(8)
    spec = toy_problem()
    swapped = replace(spec, targets=tuple(reversed(spec.targets)))
    base = random_unitary(rng, 4)
    x = 0.5 * rng.standard_normal(16)
    value, gradient = stage1_objective(x, base, spec, 4)
    swapped_value, swapped_gradient = stage1_objective(x, base, swapped, 4)
    assert swapped_value == pytest.approx(value, rel=1e-12)
    assert np.allclose(swapped_gradient, gradient, rtol=1e-10, atol=1e-14)
