from __future__ import annotations

from typing import TYPE_CHECKING, Sequence, Union

import numpy as np
from scipy.linalg import qr

from heraldic.exceptions import DimensionError

if TYPE_CHECKING:
    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = ("SeedLike", "haar_random_unitary")

SeedLike = Union[int, np.random.Generator, None]


def haar_random_unitary(dim: int, seed: SeedLike = None) -> ComplexMatrix:
    """
    Draw a unitary from the Haar measure.

    The Q factor of a complex Ginibre matrix is only Haar distributed once the
    phases of R's diagonal are moved into it.

    ### Example
    ```python
    u = haar_random_unitary(4, seed=7)
    np.allclose(u, haar_random_unitary(4, seed=7))  # True
    ```
    """
    if dim < 1:
        raise DimensionError(f"`dim` must be at least 1, got {dim}.")

    rng = np.random.default_rng(seed)
    ginibre = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = qr(ginibre)
    diagonal = np.diag(r)
    return np.asarray(q * (diagonal / np.abs(diagonal)), dtype=np.complex128)
