from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.exceptions import DimensionError, NotUnitaryError

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = ("as_square", "unitarity_deviation", "ensure_unitary")


def as_square(matrix: npt.ArrayLike, *, field: str = "matrix") -> ComplexMatrix:
    array = np.asarray(matrix, dtype=np.complex128)
    if array.ndim != 2 or array.shape[0] != array.shape[1]:
        raise DimensionError(f"`{field}` must be a square matrix, got shape {array.shape}.")
    return array


def unitarity_deviation(matrix: ComplexMatrix) -> float:
    """Frobenius norm of `U^dagger U - I`."""
    dim = matrix.shape[0]
    return float(np.linalg.norm(matrix.conj().T @ matrix - np.eye(dim)))


def ensure_unitary(
    matrix: npt.ArrayLike, tolerance: float, *, field: str = "matrix"
) -> ComplexMatrix:
    array = as_square(matrix, field=field)
    deviation = unitarity_deviation(array)
    if not deviation <= tolerance:
        raise NotUnitaryError(
            f"`{field}` is not unitary: |U^dagger U - I| = {deviation:.3e} > {tolerance:.1e}."
        )
    return array
