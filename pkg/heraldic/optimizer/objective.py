from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.circuit.cayley import CayleyChart, cayley_pullback, chart_point
from heraldic.exceptions import ConfigError, DimensionError
from heraldic.fock import ZERO_PROBABILITY
from heraldic.internal import as_square

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.fock import ProblemSpec
    from heraldic.typedefs import ComplexMatrix, RealVector

__all__: Sequence[str] = (
    "HeraldConstraint",
    "ConstraintValues",
    "relaxed_objective",
    "evaluate_constraints",
    "stage1_objective",
)


@dataclass(frozen=True)
class HeraldConstraint:
    """Pattern `pattern` must herald target `target` with probability at least `floor`."""

    pattern: int
    target: int
    floor: float


@dataclass(frozen=True, eq=False)
class ConstraintValues:
    """
    Herald probabilities and fidelities of a list of constraints, with the
    holomorphic derivatives of both with respect to the herald amplitudes.
    """

    probabilities: RealVector
    fidelities: RealVector
    probability_weights: npt.NDArray[np.complex128]
    fidelity_weights: npt.NDArray[np.complex128]


def _overlaps(spec: ProblemSpec, amplitudes: npt.NDArray[np.complex128]) -> ComplexMatrix:
    # o[t, a] = <target_t | psi_a>, unnormalized
    return spec.target_matrix.conj() @ amplitudes.T


def relaxed_objective(
    unitary: ComplexMatrix, spec: ProblemSpec, p: int
) -> tuple[float, npt.NDArray[np.complex128]]:
    """
    `sum_{t,a} P_a M_{t,a}^p` and its derivative with respect to the herald amplitudes.

    With `o` the unnormalized overlap of target `t` with the state heralded by
    `a`, every term equals `|o|^{2p} P_a^{1-p}`. Terms of patterns below
    `ZERO_PROBABILITY` count as zero.
    """
    amplitudes = spec.herald_amplitudes(unitary)
    weights = np.zeros_like(amplitudes)
    if not spec.targets:
        return 0.0, weights

    probabilities = np.sum(np.abs(amplitudes) ** 2, axis=1)
    live = probabilities >= ZERO_PROBABILITY
    if not np.any(live):
        return 0.0, weights

    psi = amplitudes[live]
    prob = probabilities[live]
    overlaps = _overlaps(spec, psi)
    squared = np.abs(overlaps) ** 2

    terms = squared**p * prob ** (1 - p)
    value = float(np.sum(terms))

    # d|o|^2 / d psi_m = conj(o) conj(t_m), d P / d psi_m = conj(psi_m)
    overlap_factor = p * squared ** (p - 1) * prob ** (1 - p) * overlaps.conj()
    norm_factor = (1 - p) * np.sum(squared**p, axis=0) * prob ** (-p)
    weights[live] = (
        overlap_factor.T @ spec.target_matrix.conj() + norm_factor[:, None] * psi.conj()
    )
    return value, weights


def evaluate_constraints(
    unitary: ComplexMatrix, spec: ProblemSpec, constraints: Sequence[HeraldConstraint]
) -> ConstraintValues:
    """
    Probability and fidelity of every constrained pattern, with their gradients.

    The fidelity of a pattern below `ZERO_PROBABILITY` is zero and so is its gradient.
    """
    amplitudes = spec.herald_amplitudes(unitary)
    count = len(constraints)
    shape = (count, *amplitudes.shape)
    probabilities = np.zeros(count)
    fidelities = np.zeros(count)
    probability_weights = np.zeros(shape, dtype=np.complex128)
    fidelity_weights = np.zeros(shape, dtype=np.complex128)

    for j, constraint in enumerate(constraints):
        psi = amplitudes[constraint.pattern]
        target = spec.target_matrix[constraint.target]
        probability = float(np.sum(np.abs(psi) ** 2))
        probabilities[j] = probability
        probability_weights[j, constraint.pattern] = psi.conj()
        if probability < ZERO_PROBABILITY:
            continue

        overlap = np.vdot(target, psi)
        squared = abs(overlap) ** 2
        fidelities[j] = squared / probability
        fidelity_weights[j, constraint.pattern] = (
            np.conj(overlap) * target.conj() / probability
            - squared * psi.conj() / probability**2
        )

    return ConstraintValues(probabilities, fidelities, probability_weights, fidelity_weights)


def stage1_objective(
    coordinate: npt.ArrayLike, chart_base: npt.ArrayLike, spec: ProblemSpec, p: int
) -> tuple[float, RealVector]:
    """
    The relaxed herald objective at a point of a Cayley chart, with its
    gradient over the `d**2` real chart coordinates.

    `coordinate` is either a Hermitian matrix or its `d**2` real coordinates.
    The value is to be maximized. Search code hands its negation to the minimizer.

    ### Example
    ```python
    value, gradient = stage1_objective(np.zeros(100), ghz_unitary, ghz_problem(), 4)
    # value == report.probabilities @ (report.overlaps ** 4).sum(axis=0)
    ```
    """
    if p < 1:
        raise ConfigError(f"The objective exponent must be at least 1, got {p}.")

    base = as_square(chart_base, field="chart_base")
    if base.shape[0] != spec.n_modes:
        raise DimensionError(
            f"The chart acts on {base.shape[0]} modes but the problem has {spec.n_modes}."
        )

    h = np.asarray(coordinate)
    if h.ndim == 1:
        chart = CayleyChart.from_vector(base, h)
    else:
        chart = CayleyChart(base, h)

    unitary = chart_point(chart)
    value, weights = relaxed_objective(unitary, spec, p)
    gamma = spec.amplitude_map.pullback(unitary, weights.ravel())
    return value, cayley_pullback(chart, gamma)
