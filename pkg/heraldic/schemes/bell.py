from __future__ import annotations

from math import pi, sqrt
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.circuit import CircuitSpec, TwoModeElement, clements_decompose, phase_element
from heraldic.exceptions import InvalidCircuitError
from heraldic.fock import (
    FockState,
    ProblemSpec,
    TargetState,
    enumerate_fock_states,
    evolve_state,
    herald_patterns,
    state_fidelity,
)
from heraldic.schemes.omega import OmegaCoefficients
from heraldic.schemes.targets import BELL_LABELS, bell_state

if TYPE_CHECKING:
    import numpy.typing as npt

__all__: Sequence[str] = (
    "BELL_INPUT",
    "BELL_PATTERNS",
    "bell_problem",
    "bell_scheme",
    "bell_herald_form",
    "bell_basis_decomposition",
)

BELL_INPUT = FockState((1, 1, 1, 1, 0, 0))
"""One photon in each of `a0, a1, b0, b1`, the herald modes `a2, b2` empty."""

BELL_PATTERNS = (FockState((2, 0)), FockState((1, 1)), FockState((0, 2)))

# block mode -> circuit mode for the two copies of the block
_TOP = (0, 1, 4)
_BOTTOM = (2, 3, 5)

_ROTATION = np.array([[1 / 2, -sqrt(3) / 2], [sqrt(3) / 2, 1 / 2]], dtype=np.complex128)


def bell_problem(targets: Sequence[TargetState] | None = None) -> ProblemSpec:
    """
    Modes `(a0, a1, b0, b1, a2, b2)`, the last two measured.

    Defaults to the `psi+` and `psi-` targets the search looks for and every
    two-photon pattern on the herald modes.
    """
    return ProblemSpec(
        n_target_modes=4,
        n_ancilla_modes=2,
        input=BELL_INPUT,
        ancilla_patterns=tuple(herald_patterns(2, 2)),
        targets=tuple(
            targets if targets is not None else (bell_state("psi+"), bell_state("psi-"))
        ),
    )


def _block_elements(block: npt.ArrayLike, modes: tuple[int, int, int]) -> list[TwoModeElement]:
    decomposition = clements_decompose(block)
    elements = [
        TwoModeElement(e.theta, e.phi, (modes[e.modes[0]], modes[e.modes[1]]))
        for e in reversed(decomposition.elements)
    ]
    for k, angle in enumerate(decomposition.output_phases.angles):
        if abs(angle) > 1e-15:
            partner = modes[(k + 1) % 3]
            elements.append(phase_element(modes[k], float(angle), partner))
    return elements


def bell_scheme(s: int, block: npt.ArrayLike) -> CircuitSpec:
    """
    Two copies of a three-mode block fed through a balanced element on
    `(a1, b1)`, with a balanced element on the herald modes `(a2, b2)` last.

    For `s = -1` a pi/2 phase shifter on `b1` follows the first element: a
    photon pair in that mode picks up `e^{i pi} = -1`, which flips the
    relative sign of the heralded superposition.

    ### Example
    ```python
    report = herald_analysis(compose(bell_scheme(1, omega_block())), bell_problem())
    report.probability((1, 1))  # 2 / 27
    ```
    """
    if s not in (1, -1):
        raise InvalidCircuitError(f"`s` must be +1 or -1, got {s}.")

    elements = [TwoModeElement(pi / 4, 0.0, (1, 3))]
    if s == -1:
        elements.append(phase_element(3, pi / 2, 1))
    elements += _block_elements(block, _TOP)
    elements += _block_elements(block, _BOTTOM)
    elements.append(TwoModeElement(pi / 4, 0.0, (4, 5)))
    return CircuitSpec.from_physical_order(6, elements)


def bell_herald_form(coefficients: OmegaCoefficients, s: int) -> npt.NDArray[np.complex128]:
    """
    The amplitudes of `a_i b_j` after heralding one photon in each of `a2` and
    `b2`, predicted from the block coefficients alone.

    Entry `[i, j]` is minus the amplitude of the output with single photons in
    `a_i`, `b_j`, `a2` and `b2`.
    """
    beta, b = coefficients.beta, coefficients.B
    return (1 + s) * coefficients.A * np.outer(beta, beta) + 2 * coefficients.alpha * (
        np.outer(b, beta) + s * np.outer(beta, b)
    )


def bell_basis_decomposition(
    state: npt.ArrayLike, *, rotated: bool = False
) -> dict[str, float]:
    """
    Fidelity of a two-photon state on `(a0, a1, b0, b1)` with every Bell state.

    `state` is read over `enumerate_fock_states(4, 2)`. With `rotated` the
    Bell states are first expressed in modes rotated by 60 degrees on each rail pair.
    """
    basis = enumerate_fock_states(4, 2)
    vector = np.asarray(state, dtype=np.complex128)
    rotation = np.zeros((4, 4), dtype=np.complex128)
    rotation[:2, :2] = _ROTATION
    rotation[2:, 2:] = _ROTATION

    out: dict[str, float] = {}
    for label in BELL_LABELS:
        target = bell_state(label)
        if rotated:
            amplitudes = evolve_state(rotation, target.vector(basis), basis)
            target = TargetState.from_vector(amplitudes, basis, label)
        out[label] = state_fidelity(vector, target, basis)
    return out
