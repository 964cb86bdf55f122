from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, prod, sqrt
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.internal.permanent import batched_permanents

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix, ComplexVector

__all__: Sequence[str] = ("AmplitudeMap", "repeated_modes", "fock_norm")


def repeated_modes(occupations: Sequence[int]) -> npt.NDArray[np.intp]:
    """Mode indices with every mode repeated as often as it is occupied."""
    return np.repeat(np.arange(len(occupations), dtype=np.intp), occupations)


def fock_norm(occupations: Sequence[int]) -> float:
    return sqrt(prod(factorial(n) for n in occupations))


@dataclass(frozen=True, eq=False)
class AmplitudeMap:
    """
    Transition amplitudes from one input occupation to a fixed list of output
    occupations, together with their derivatives with respect to the unitary.

    All outputs must carry the photon number of the input.
    """

    input: tuple[int, ...]
    outputs: tuple[tuple[int, ...], ...]
    _columns: npt.NDArray[np.intp] = field(init=False, repr=False)
    _rows: npt.NDArray[np.intp] = field(init=False, repr=False)
    _norms: npt.NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n_photons = sum(self.input)
        for output in self.outputs:
            if sum(output) != n_photons:
                raise ValueError(f"Output {output} does not carry {n_photons} photons.")

        columns = repeated_modes(self.input)
        rows = np.array(
            [repeated_modes(output) for output in self.outputs], dtype=np.intp
        ).reshape(len(self.outputs), n_photons)
        norms = np.array(
            [fock_norm(self.input) * fock_norm(output) for output in self.outputs],
            dtype=np.float64,
        )
        object.__setattr__(self, "_columns", columns)
        object.__setattr__(self, "_rows", rows)
        object.__setattr__(self, "_norms", norms)

    @property
    def n_photons(self) -> int:
        return len(self._columns)

    def _submatrices(self, unitary: ComplexMatrix) -> npt.NDArray[np.complex128]:
        return unitary[self._rows[:, :, None], self._columns[None, None, :]]

    def amplitudes(self, unitary: ComplexMatrix) -> ComplexVector:
        if not self.outputs:
            return np.zeros(0, dtype=np.complex128)
        return batched_permanents(self._submatrices(unitary)) / self._norms

    def pullback(self, unitary: ComplexMatrix, weights: ComplexVector) -> ComplexMatrix:
        """
        `sum_o weights[o] * d amplitude[o] / d unitary`, as a matrix shaped like `unitary`.

        The derivative of a permanent in one entry is the permanent of the
        complementary minor. Repeated rows and columns scatter into the same
        entry of the unitary and accumulate.
        """
        gamma = np.zeros(unitary.shape, dtype=np.complex128)
        n = self.n_photons
        if n == 0 or not self.outputs:
            return gamma

        sub = self._submatrices(unitary)
        keep = np.array([[i for i in range(n) if i != drop] for drop in range(n)], dtype=np.intp)
        keep = keep.reshape(n, n - 1)
        minors = sub[:, keep[:, None, :, None], keep[None, :, None, :]]
        minor_perms = batched_permanents(minors)

        scaled = minor_perms * (np.asarray(weights) / self._norms)[:, None, None]
        rows = np.broadcast_to(self._rows[:, :, None], scaled.shape)
        cols = np.broadcast_to(self._columns[None, None, :], scaled.shape)
        np.add.at(gamma, (rows, cols), scaled)
        return gamma
