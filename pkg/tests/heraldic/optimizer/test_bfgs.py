import numpy as np
import pytest

from heraldic import BFGSOptions, BFGSStatus, ConfigError, OptimizationError, bfgs_minimize


def _quadratic(x):
    scales = np.arange(1, x.size + 1, dtype=float)
    return float(np.sum(scales * (x - 1) ** 2)), 2 * scales * (x - 1)


def _rosenbrock(x):
    a, b = x
    value = (1 - a) ** 2 + 100 * (b - a**2) ** 2
    gradient = np.array([-2 * (1 - a) - 400 * a * (b - a**2), 200 * (b - a**2)])
    return value, gradient


def test_quadratic():
    result = bfgs_minimize(_quadratic, np.zeros(6))
    assert result.converged
    assert np.max(np.abs(result.grad)) <= 1e-9
    assert np.allclose(result.x, 1, atol=1e-8)
    assert result.fun == pytest.approx(0, abs=1e-14)


def test_rosenbrock():
    result = bfgs_minimize(_rosenbrock, [-1.2, 1.0])
    assert result.converged
    assert np.allclose(result.x, [1, 1], atol=1e-6)


def test_constant_function_converges_immediately():
    result = bfgs_minimize(lambda x: (3.0, np.zeros_like(x)), np.ones(3))
    assert result.converged
    assert result.iterations == 0
    assert result.evaluations == 1


def test_iteration_budget():
    result = bfgs_minimize(_rosenbrock, [-1.2, 1.0], BFGSOptions(max_iterations=2))
    assert result.status is BFGSStatus.MAX_ITERATIONS
    assert result.iterations == 2


def test_non_finite_start():
    with pytest.raises(OptimizationError):
        bfgs_minimize(lambda x: (float("nan"), np.zeros_like(x)), np.zeros(2))


def test_options_validation():
    with pytest.raises(ConfigError):
        BFGSOptions(gradient_tolerance=0)
    with pytest.raises(ConfigError):
        BFGSOptions(max_iterations=-1)
    with pytest.raises(ConfigError):
        BFGSOptions(c1=0.9, c2=0.5)
    with pytest.raises(ConfigError):
        BFGSOptions(damping=1)
