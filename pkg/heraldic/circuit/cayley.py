from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.exceptions import DimensionError, NotHermitianError
from heraldic.internal import as_square

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix, RealVector

__all__: Sequence[str] = (
    "CayleyChart",
    "chart_point",
    "hermitian_from_vector",
    "hermitian_to_vector",
    "cayley_pullback",
)

_HERMITIAN_TOLERANCE = 1e-12


def hermitian_from_vector(vector: npt.ArrayLike, dim: int) -> ComplexMatrix:
    """
    Unpack `dim**2` reals into a Hermitian matrix: the diagonal first, then
    the real parts and then the imaginary parts of the strict upper triangle
    in row-major order.
    """
    x = np.asarray(vector, dtype=np.float64)
    if x.shape != (dim * dim,):
        raise DimensionError(f"A {dim}-mode chart has {dim * dim} coordinates, got {x.size}.")

    rows, cols = np.triu_indices(dim, 1)
    n_upper = len(rows)
    matrix = np.diag(x[:dim]).astype(np.complex128)
    upper = x[dim : dim + n_upper] + 1j * x[dim + n_upper :]
    matrix[rows, cols] = upper
    matrix[cols, rows] = upper.conj()
    return matrix


def hermitian_to_vector(matrix: ComplexMatrix) -> RealVector:
    dim = matrix.shape[0]
    rows, cols = np.triu_indices(dim, 1)
    upper = matrix[rows, cols]
    return np.concatenate([np.real(np.diag(matrix)), upper.real, upper.imag])


def _check_hermitian(matrix: ComplexMatrix) -> ComplexMatrix:
    scale = max(1.0, float(np.max(np.abs(matrix), initial=0.0)))
    skew = float(np.max(np.abs(matrix - matrix.conj().T), initial=0.0))
    if skew > _HERMITIAN_TOLERANCE * scale:
        raise NotHermitianError(f"Chart coordinate deviates from Hermitian by {skew:.3e}.")
    return (matrix + matrix.conj().T) / 2


@dataclass(frozen=True, eq=False)
class CayleyChart:
    """
    A local chart of the unitary group around `base`: the Hermitian
    `coordinate` H maps to `base @ (iI - H) (iI + H)^-1`, and `H = 0` maps to
    `base` itself.
    """

    base: ComplexMatrix
    coordinate: ComplexMatrix

    def __post_init__(self) -> None:
        base = as_square(self.base, field="base")
        coordinate = as_square(self.coordinate, field="coordinate")
        if base.shape != coordinate.shape:
            raise DimensionError(
                f"Chart base has shape {base.shape} but the coordinate has {coordinate.shape}."
            )
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "coordinate", _check_hermitian(coordinate))

    @classmethod
    def at(cls, base: npt.ArrayLike) -> CayleyChart:
        """The chart centred on `base`, with coordinate zero."""
        matrix = as_square(base, field="base")
        return cls(matrix, np.zeros_like(matrix))

    @classmethod
    def from_vector(cls, base: npt.ArrayLike, vector: npt.ArrayLike) -> CayleyChart:
        matrix = as_square(base, field="base")
        return cls(matrix, hermitian_from_vector(vector, matrix.shape[0]))

    @property
    def dim(self) -> int:
        return int(self.base.shape[0])

    def point(self) -> ComplexMatrix:
        return chart_point(self)


def _spectral(coordinate: ComplexMatrix) -> tuple[ComplexMatrix, ComplexMatrix]:
    """The Cayley factor `(iI - H)(iI + H)^-1` and the resolvent `(iI + H)^-1`."""
    eigenvalues, vectors = np.linalg.eigh(coordinate)
    resolvent = 1 / (1j + eigenvalues)
    factor = (1j - eigenvalues) * resolvent
    return (vectors * factor) @ vectors.conj().T, (vectors * resolvent) @ vectors.conj().T


def chart_point(chart: CayleyChart) -> ComplexMatrix:
    """
    The unitary at the chart's coordinate.

    ### Example
    ```python
    chart_point(CayleyChart.at(u))  # u, exactly
    ```
    """
    if not np.any(chart.coordinate):
        return chart.base.copy()
    factor, _ = _spectral(chart.coordinate)
    return chart.base @ factor


def cayley_pullback(chart: CayleyChart, gamma: ComplexMatrix) -> RealVector:
    """
    Gradient over the `d**2` chart coordinates of a real function `F(U)`.

    `gamma` is the holomorphic sensitivity of `F` at the chart point, in the
    sense that `dF = 2 Re sum(gamma * dU)`. With `C` the Cayley factor and
    `K = (iI + H)^-1`, `dU = -U0 (I + C) dH K`, hence `dF = -2 Re Tr(W dH)`
    with `W = K gamma^T U0 (I + C)`.
    """
    dim = chart.dim
    factor, resolvent = _spectral(chart.coordinate)
    w = resolvent @ gamma.T @ chart.base @ (np.eye(dim) + factor)

    rows, cols = np.triu_indices(dim, 1)
    diagonal = -2 * np.real(np.diag(w))
    real_part = -2 * np.real(w[rows, cols] + w[cols, rows])
    imag_part = 2 * np.imag(w[cols, rows] - w[rows, cols])
    return np.concatenate([diagonal, real_part, imag_part])
