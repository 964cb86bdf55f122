from __future__ import annotations

from typing import Callable, Sequence, Tuple

import numpy as np
import numpy.typing as npt

__all__: Sequence[str] = (
    "ComplexMatrix",
    "ComplexVector",
    "RealVector",
    "ObjectiveT",
    "PatternT",
)

ComplexMatrix = npt.NDArray[np.complex128]
ComplexVector = npt.NDArray[np.complex128]
RealVector = npt.NDArray[np.float64]

ObjectiveT = Callable[[RealVector], Tuple[float, RealVector]]
"""A smooth function returning its value and gradient at a point."""

PatternT = Tuple[int, ...]
