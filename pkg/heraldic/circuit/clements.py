from __future__ import annotations

from logging import getLogger
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.circuit.elements import CircuitSpec, PhaseLayer, TwoModeElement
from heraldic.internal import ensure_unitary

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = ("clements_decompose",)

_log = getLogger(__name__)

_UNITARITY_TOLERANCE = 1e-8


def _wrap(angle: float) -> float:
    return float(np.angle(np.exp(1j * angle)))


def _null_from_right(matrix: ComplexMatrix, row: int, col: int) -> TwoModeElement:
    """Mix columns `(col, col + 1)` with `T^-1` so that `matrix[row, col]` vanishes."""
    a, b = matrix[row, col], matrix[row, col + 1]
    if a == 0:
        theta, phi = 0.0, 0.0
    else:
        theta = float(np.arctan2(abs(a), abs(b)))
        phi = _wrap(np.angle(a) - np.angle(b))

    c, s, phase = np.cos(theta), np.sin(theta), np.exp(-1j * phi)
    left, right = matrix[:, col].copy(), matrix[:, col + 1].copy()
    matrix[:, col] = phase * c * left - s * right
    matrix[:, col + 1] = phase * s * left + c * right
    return TwoModeElement(theta, phi, (col, col + 1))


def _null_from_left(matrix: ComplexMatrix, row: int, col: int) -> TwoModeElement:
    """Mix rows `(row - 1, row)` with `T` so that `matrix[row, col]` vanishes."""
    a, b = matrix[row - 1, col], matrix[row, col]
    if b == 0:
        theta, phi = 0.0, 0.0
    else:
        theta = float(np.arctan2(abs(b), abs(a)))
        phi = _wrap(np.pi + np.angle(b) - np.angle(a))

    element = TwoModeElement(theta, phi, (row - 1, row))
    matrix[[row - 1, row], :] = element.block() @ matrix[[row - 1, row], :]
    return element


def clements_decompose(unitary: npt.ArrayLike) -> CircuitSpec:
    """
    Factor a unitary into `d (d - 1) / 2` two-mode elements in the rectangular
    mesh plus an output phase layer.

    Entries are nulled diagonal by diagonal, alternating between column
    operations (right multiplication) and row operations (left
    multiplication). The row operations are afterwards moved through the
    diagonal so every element ends up to the right of a single phase layer.
    Every elimination is recorded, also when it is trivial, so the element
    count is always exactly `d (d - 1) / 2`.

    ### Example
    ```python
    spec = clements_decompose(haar_random_unitary(6, seed=1))
    np.linalg.norm(compose(spec) - u)  # < 1e-10
    ```
    """
    work = ensure_unitary(unitary, _UNITARITY_TOLERANCE, field="unitary").copy()
    dim = work.shape[0]

    right_ops: list[TwoModeElement] = []
    left_ops: list[TwoModeElement] = []

    for i in range(1, dim):
        if i % 2 == 1:
            for j in range(i):
                right_ops.append(_null_from_right(work, dim - 1 - j, i - 1 - j))
        else:
            for j in range(1, i + 1):
                left_ops.append(_null_from_left(work, dim - 1 - i + j, j - 1))

    # L_m ... L_1 U R_1^-1 ... R_k^-1 = D
    diagonal = np.diag(work).copy()
    moved: list[TwoModeElement] = []
    for element in reversed(left_ops):
        n, m = element.modes
        d_n, d_m = diagonal[n], diagonal[m]
        # T^-1(theta, phi) diag(d_n, d_m) = diag(-e^{-i phi} d_m, d_m) T(theta, phi')
        moved.append(
            TwoModeElement(element.theta, _wrap(np.angle(-d_n * np.conj(d_m))), element.modes)
        )
        diagonal[n] = -np.exp(-1j * element.phi) * d_m

    # moved holds T'_m ... T'_1; the circuit reads D T'_1 ... T'_m R_k ... R_1
    elements = tuple(reversed(moved)) + tuple(reversed(right_ops))
    phases = diagonal / np.abs(diagonal)

    _log.debug("Decomposed a %d-mode unitary into %d elements", dim, len(elements))
    return CircuitSpec(dim, elements, PhaseLayer(tuple(phases)))
