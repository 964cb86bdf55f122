from __future__ import annotations

from itertools import permutations
from typing import Any, Sequence

import numpy as np

__all__: Sequence[str] = ("naive_permanent",)


def naive_permanent(matrix: Any) -> complex:
    """Sum over all `n!` permutations. Only meant as a reference for small matrices."""
    array = np.asarray(matrix, dtype=np.complex128)
    n = array.shape[0]
    total = 0j
    for perm in permutations(range(n)):
        term = 1 + 0j
        for row, col in enumerate(perm):
            term *= array[row, col]
        total += term
    return total
