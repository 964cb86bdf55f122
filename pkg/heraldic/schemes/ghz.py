from __future__ import annotations

from math import acos, pi, sqrt
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.circuit import (
    CircuitSpec,
    PhaseLayer,
    TwoModeElement,
    clements_decompose,
    element_matrix,
)
from heraldic.fock import FockState, ProblemSpec, TargetState, herald_patterns
from heraldic.schemes.targets import ghz_canonical_targets

if TYPE_CHECKING:
    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = (
    "GHZ_INPUT",
    "GHZ_PATTERNS",
    "ghz_problem",
    "ghz_scheme",
    "ghz_arm_blocks",
    "ghz_scheme_block_form",
)

GHZ_INPUT = FockState((1, 1, 1, 1, 1, 1, 0, 0, 0, 0))
"""Six single photons in the target modes, the four ancilla modes empty."""

GHZ_PATTERNS = (FockState((1, 1, 1, 0)), FockState((1, 1, 0, 1)))
"""The two ancilla outcomes that herald a GHZ state."""

_BALANCED = pi / 4
_THIRD = acos(1 / sqrt(3))
_SIXTH = pi / 6

# (theta, phi, modes) in the order light passes them
_GHZ_ELEMENTS = (
    (_BALANCED, 0.0, (1, 2)),
    (_BALANCED, 0.0, (8, 2)),
    (_BALANCED, 0.0, (0, 1)),
    (_THIRD, 0.0, (1, 7)),
    (_SIXTH, pi, (0, 1)),
    (_BALANCED, 0.0, (4, 5)),
    (_BALANCED, 0.0, (5, 9)),
    (_BALANCED, 0.0, (3, 4)),
    (_THIRD, 0.0, (4, 6)),
    (_SIXTH, pi, (3, 4)),
    (_BALANCED, 0.0, (7, 6)),
    (_BALANCED, 0.0, (9, 8)),
)
_GHZ_SIGN_FLIPS = (3, 4)

# block output row -> circuit mode
_BLOCK_OUTPUT_POSITION = (0, 1, 6, 2, 9, 3, 4, 7, 5, 8)
# circuit input port k is fed by block input column _BLOCK_INPUT_COLUMN[k]
_BLOCK_INPUT_COLUMN = (0, 2, 3, 5, 7, 8, 1, 4, 6, 9)


def ghz_problem(
    targets: Sequence[TargetState] | None = None,
    patterns: Sequence[FockState] | None = None,
) -> ProblemSpec:
    """
    Six target modes, four ancilla modes, six input photons.

    Defaults to the two canonical GHZ targets and all four patterns that put
    three photons into distinct ancilla modes.
    """
    return ProblemSpec(
        n_target_modes=6,
        n_ancilla_modes=4,
        input=GHZ_INPUT,
        ancilla_patterns=tuple(
            patterns if patterns is not None else herald_patterns(4, 3, max_occupation=1)
        ),
        targets=tuple(targets if targets is not None else ghz_canonical_targets()),
    )


def ghz_scheme() -> CircuitSpec:
    """
    The 12 element scheme heralding `(|101010> +- |010101>) / sqrt(2)` with
    probability 1/108 for each of the patterns in `GHZ_PATTERNS`.

    ### Example
    ```python
    count_nontrivial(ghz_scheme())  # 12
    ```
    """
    elements = [TwoModeElement(theta, phi, modes) for theta, phi, modes in _GHZ_ELEMENTS]
    phases = PhaseLayer(tuple(-1 + 0j if k in _GHZ_SIGN_FLIPS else 1 + 0j for k in range(10)))
    return CircuitSpec.from_physical_order(10, elements, phases)


def ghz_arm_blocks() -> tuple[ComplexMatrix, ComplexMatrix]:
    """
    The top and bottom five-mode blocks of the scheme. They only differ by
    the signs of a few entries.
    """
    top = np.array(
        [
            [-sqrt(2 / 3), 1 / sqrt(6), 1 / (2 * sqrt(3)), -1 / (2 * sqrt(3)), 0],
            [0, -1 / sqrt(2), 1 / 2, -1 / 2, 0],
            [1 / sqrt(3), 1 / sqrt(3), 1 / sqrt(6), -1 / sqrt(6), 0],
            [0, 0, 1 / 2, 1 / 2, -1 / sqrt(2)],
            [0, 0, 1 / 2, 1 / 2, 1 / sqrt(2)],
        ],
        dtype=np.complex128,
    )
    bottom = top.copy()
    bottom[[0, 2], 0] *= -1
    bottom[:3, 2:4] *= -1
    return top, bottom


def ghz_scheme_block_form() -> CircuitSpec:
    """
    The same scheme assembled from its two arm blocks.

    The blocks act side by side, their outputs are routed onto the circuit
    modes, ancilla pairs `(6, 7)` and `(8, 9)` are mixed on balanced
    elements and the inputs are relabelled so the six photons enter modes 0
    to 5. The herald report equals that of `ghz_scheme`.
    """
    top, bottom = ghz_arm_blocks()
    blocks = np.zeros((10, 10), dtype=np.complex128)
    blocks[:5, :5] = top
    blocks[5:, 5:] = bottom

    routing = np.zeros((10, 10))
    for row, mode in enumerate(_BLOCK_OUTPUT_POSITION):
        routing[mode, row] = 1

    mixing = element_matrix(TwoModeElement(_BALANCED, 0.0, (8, 9)), 10) @ element_matrix(
        TwoModeElement(_BALANCED, 0.0, (6, 7)), 10
    )
    unitary = mixing @ routing @ blocks
    return clements_decompose(unitary[:, list(_BLOCK_INPUT_COLUMN)])
