from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from logging import getLogger
from typing import TYPE_CHECKING, Sequence

import numpy as np
from scipy.optimize import line_search

from heraldic.exceptions import ConfigError, OptimizationError

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ObjectiveT, RealVector

__all__: Sequence[str] = ("BFGSOptions", "BFGSStatus", "BFGSResult", "bfgs_minimize")

_log = getLogger(__name__)


class BFGSStatus(Enum):
    CONVERGED = "converged"
    """The gradient norm dropped below the tolerance."""
    MAX_ITERATIONS = "max_iterations"
    LINE_SEARCH_FAILED = "line_search_failed"
    """No Wolfe step was found, even after resetting the Hessian approximation."""


@dataclass(frozen=True)
class BFGSOptions:
    """
    Args:
        gradient_tolerance: Stop once the max-norm of the gradient is below this.
        max_iterations: Number of accepted steps before giving up.
        c1: Sufficient decrease constant of the Wolfe conditions.
        c2: Curvature constant of the Wolfe conditions.
        damping: Powell damping threshold. Updates are blended towards the current
            Hessian approximation whenever `s.y < damping * s.B.s`.
    """

    gradient_tolerance: float = 1e-9
    max_iterations: int = 2000
    c1: float = 1e-4
    c2: float = 0.9
    damping: float = 0.2

    def __post_init__(self) -> None:
        if self.gradient_tolerance <= 0:
            raise ConfigError(
                f"`gradient_tolerance` must be positive, got {self.gradient_tolerance}."
            )
        if self.max_iterations < 0:
            raise ConfigError(f"`max_iterations` must be non-negative, got {self.max_iterations}.")
        if not 0 < self.c1 < self.c2 < 1:
            raise ConfigError(f"Need 0 < c1 < c2 < 1, got c1={self.c1}, c2={self.c2}.")
        if not 0 <= self.damping < 1:
            raise ConfigError(f"`damping` must lie in [0, 1), got {self.damping}.")


@dataclass(frozen=True, eq=False)
class BFGSResult:
    x: RealVector
    fun: float
    grad: RealVector
    status: BFGSStatus
    iterations: int
    evaluations: int

    @property
    def converged(self) -> bool:
        return self.status is BFGSStatus.CONVERGED


@dataclass
class _CachedObjective:
    """Serves `f` and its gradient separately to the line search from a single evaluation."""

    objective: ObjectiveT
    evaluations: int = 0
    _key: bytes = field(default=b"", repr=False)
    _value: tuple[float, RealVector] | None = field(default=None, repr=False)

    def __call__(self, x: RealVector) -> tuple[float, RealVector]:
        key = np.ascontiguousarray(x).tobytes()
        if self._value is not None and key == self._key:
            return self._value
        value, gradient = self.objective(x)
        result = (float(value), np.asarray(gradient, dtype=np.float64))
        self._key, self._value = key, result
        self.evaluations += 1
        return result

    def fun(self, x: RealVector) -> float:
        return self(x)[0]

    def grad(self, x: RealVector) -> RealVector:
        return self(x)[1]


def _wolfe_step(
    cached: _CachedObjective,
    x: RealVector,
    direction: RealVector,
    gradient: RealVector,
    value: float,
    previous: float | None,
    options: BFGSOptions,
) -> float | None:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        alpha, *_ = line_search(
            cached.fun,
            cached.grad,
            x,
            direction,
            gfk=gradient,
            old_fval=value,
            old_old_fval=previous,
            c1=options.c1,
            c2=options.c2,
        )
    if alpha is None or not np.isfinite(alpha) or alpha <= 0:
        return None
    return float(alpha)


def bfgs_minimize(
    objective: ObjectiveT, x0: npt.ArrayLike, options: BFGSOptions | None = None
) -> BFGSResult:
    """
    Minimize a smooth function with a damped BFGS method and a Wolfe line search.

    The inverse Hessian approximation starts as the identity, is rescaled by
    `s.y / y.y` after the first step and is updated with Powell-damped pairs
    so it stays positive definite. A failed line search resets the
    approximation once before the run gives up and returns the best point so far.

    Args:
        objective: Returns the value and the gradient at a point.
        x0: Starting point.
        options: Tolerances and line-search constants.

    Raises:
        OptimizationError: The value or the gradient at `x0` is not finite.
    """
    options = options or BFGSOptions()
    cached = _CachedObjective(objective)

    x = np.array(x0, dtype=np.float64).ravel()
    value, gradient = cached(x)
    if not np.isfinite(value) or not np.all(np.isfinite(gradient)):
        raise OptimizationError("The objective or its gradient is not finite at the start point.")

    n = x.size
    identity = np.eye(n)
    inverse_hessian = identity.copy()
    previous: float | None = None
    scaled = False
    reset = False
    iterations = 0
    status = BFGSStatus.MAX_ITERATIONS

    while True:
        if np.max(np.abs(gradient), initial=0.0) <= options.gradient_tolerance:
            status = BFGSStatus.CONVERGED
            break
        if iterations >= options.max_iterations:
            break

        direction = -inverse_hessian @ gradient
        if gradient @ direction >= 0:
            inverse_hessian = identity.copy()
            direction = -gradient

        alpha = _wolfe_step(cached, x, direction, gradient, value, previous, options)
        if alpha is None:
            if reset:
                _log.debug("Line search failed at iteration %d", iterations)
                status = BFGSStatus.LINE_SEARCH_FAILED
                break
            _log.debug("Line search failed at iteration %d, resetting the Hessian", iterations)
            inverse_hessian = identity.copy()
            previous = None
            reset = True
            continue

        step = alpha * direction
        x_new = x + step
        value_new, gradient_new = cached(x_new)
        if not np.isfinite(value_new) or value_new > value:
            if reset:
                status = BFGSStatus.LINE_SEARCH_FAILED
                break
            inverse_hessian = identity.copy()
            previous = None
            reset = True
            continue
        reset = False

        change = gradient_new - gradient
        # B s equals -alpha g for B the inverse of the current approximation
        hessian_step = -alpha * gradient
        s_b_s = float(step @ hessian_step)
        s_y = float(step @ change)
        if s_y < options.damping * s_b_s:
            blend = (1 - options.damping) * s_b_s / (s_b_s - s_y)
            change = blend * change + (1 - blend) * hessian_step
            s_y = float(step @ change)

        if s_y > 0:
            if not scaled:
                inverse_hessian = identity * (s_y / float(change @ change))
                scaled = True
            rho = 1 / s_y
            left = identity - rho * np.outer(step, change)
            inverse_hessian = left @ inverse_hessian @ left.T + rho * np.outer(step, step)

        iterations += 1
        previous, value = value, value_new
        x, gradient = x_new, gradient_new

    _log.debug(
        "BFGS finished with %s after %d iterations and %d evaluations, f = %.12g",
        status.value,
        iterations,
        cached.evaluations,
        value,
    )
    return BFGSResult(
        x=x,
        fun=float(value),
        grad=gradient,
        status=status,
        iterations=iterations,
        evaluations=cached.evaluations,
    )
