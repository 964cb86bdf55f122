from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.exceptions import DimensionError
from heraldic.internal import ensure_unitary

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = (
    "omega_block",
    "omega_prime_block",
    "OmegaCoefficients",
    "omega_coefficients",
)

_UNITARITY_TOLERANCE = 1e-10


def omega_block() -> ComplexMatrix:
    """The three-mode block that heralds Bell pairs with probability 2/27."""
    return np.array(
        [
            [-sqrt(2 / 3), 1 / sqrt(6), 1 / sqrt(6)],
            [0, 1 / sqrt(2), -1 / sqrt(2)],
            [1 / sqrt(3), 1 / sqrt(3), 1 / sqrt(3)],
        ],
        dtype=np.complex128,
    )


def omega_prime_block() -> ComplexMatrix:
    """`omega_block` without its closing 30 degree element."""
    return np.array(
        [
            [1 / sqrt(2), -1 / sqrt(2), 0],
            [1 / sqrt(6), 1 / sqrt(6), -sqrt(2 / 3)],
            [1 / sqrt(3), 1 / sqrt(3), 1 / sqrt(3)],
        ],
        dtype=np.complex128,
    )


@dataclass(frozen=True, eq=False)
class OmegaCoefficients:
    """
    How a three-mode block maps its single-photon port and its two-photon port.

    With `w_k` the creation operator of block mode `k`, mode 2 the herald port:

    - `w_0 -> alpha w_2 + beta[0] w_0 + beta[1] w_1`
    - `w_1^2 / 2 -> A w_2^2 + 2 (B[0] w_0 + B[1] w_1) w_2 + C`

    `C` and `Dq` are quadratic forms over modes 0 and 1, stored as the
    coefficients of `(w_0^2, w_0 w_1, w_1^2)`.
    """

    alpha: complex
    A: complex
    beta: npt.NDArray[np.complex128]
    B: npt.NDArray[np.complex128]
    C: npt.NDArray[np.complex128]

    @property
    def Dq(self) -> npt.NDArray[np.complex128]:
        """`alpha C + 2 B beta`, the quadratic form accompanying a single `w_2`."""
        b, beta = self.B, self.beta
        cross = np.array([b[0] * beta[0], b[0] * beta[1] + b[1] * beta[0], b[1] * beta[1]])
        return self.alpha * self.C + 2 * cross


def omega_coefficients(block: npt.ArrayLike) -> OmegaCoefficients:
    """
    Read the coefficients off the columns of a block unitary.

    ### Example
    ```python
    coefficients = omega_coefficients(omega_block())
    coefficients.alpha  # 1 / sqrt(3)
    coefficients.A  # 1 / 6
    ```
    """
    matrix = ensure_unitary(block, _UNITARITY_TOLERANCE, field="block")
    if matrix.shape != (3, 3):
        raise DimensionError(f"`block` must be 3x3, got {matrix.shape}.")

    single, double = matrix[:, 0], matrix[:, 1]
    herald = double[2]
    return OmegaCoefficients(
        alpha=complex(single[2]),
        A=complex(herald**2 / 2),
        beta=single[:2].copy(),
        B=double[:2] * herald / 2,
        C=np.array([double[0] ** 2 / 2, double[0] * double[1], double[1] ** 2 / 2]),
    )
