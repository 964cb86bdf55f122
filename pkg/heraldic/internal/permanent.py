from __future__ import annotations

from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    import numpy.typing as npt

__all__: Sequence[str] = ("batched_permanents",)


def batched_permanents(matrices: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """
    Permanents of a stack of square matrices with shape `(..., n, n)`.

    Ryser's inclusion-exclusion formula walked in Gray-code order, so every
    subset differs from the previous one by a single column and the row sums
    are updated in place. The cost is `O(2**n * n)` per matrix.
    """
    stack = np.asarray(matrices, dtype=np.complex128)
    *batch, n, n_cols = stack.shape
    if n != n_cols:
        raise ValueError(f"Expected square matrices, got shape {stack.shape}.")

    if n == 0:
        return np.ones(batch, dtype=np.complex128)

    flat = stack.reshape(-1, n, n)
    row_sums = np.zeros((flat.shape[0], n), dtype=np.complex128)
    total = np.zeros(flat.shape[0], dtype=np.complex128)

    for k in range(1, 1 << n):
        # column that flips between Gray codes k - 1 and k
        j = (k & -k).bit_length() - 1
        gray = k ^ (k >> 1)
        if gray >> j & 1:
            row_sums += flat[:, :, j]
        else:
            row_sums -= flat[:, :, j]

        term = np.prod(row_sums, axis=1)
        # popcount(gray) has the parity of k
        if k & 1:
            total -= term
        else:
            total += term

    if n & 1:
        total = -total
    return total.reshape(batch)
