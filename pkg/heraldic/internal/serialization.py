from __future__ import annotations

import hashlib
import json
from typing import TYPE_CHECKING, Any, Sequence

import numpy as np

from heraldic.exceptions import DimensionError

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = (
    "complex_to_pairs",
    "complex_from_pairs",
    "matrix_to_json",
    "matrix_from_json",
    "canonical_json",
    "config_digest",
)


def complex_to_pairs(values: npt.ArrayLike) -> list[list[float]]:
    """Flatten complex numbers into `[re, im]` pairs in row-major order."""
    flat = np.asarray(values, dtype=np.complex128).ravel()
    return [[float(v.real), float(v.imag)] for v in flat]


def complex_from_pairs(pairs: Any, *, field: str = "value") -> npt.NDArray[np.complex128]:
    try:
        array = np.asarray(pairs, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise DimensionError(f"`{field}` must be a list of [re, im] pairs.") from e

    if array.size == 0:
        return np.zeros(0, dtype=np.complex128)
    if array.ndim != 2 or array.shape[1] != 2:
        raise DimensionError(f"`{field}` must be a list of [re, im] pairs.")
    return array[:, 0] + 1j * array[:, 1]


def matrix_to_json(matrix: ComplexMatrix) -> dict[str, Any]:
    return {"dim": int(matrix.shape[0]), "matrix": complex_to_pairs(matrix)}


def matrix_from_json(data: Any) -> ComplexMatrix:
    if not isinstance(data, dict) or "dim" not in data or "matrix" not in data:
        raise DimensionError("A matrix document needs the keys `dim` and `matrix`.")

    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DimensionError(f"`dim` must be a positive integer, got {dim!r}.")

    values = complex_from_pairs(data["matrix"], field="matrix")
    if values.size != dim * dim:
        raise DimensionError(
            f"`matrix` holds {values.size} entries but `dim` = {dim} needs {dim * dim}."
        )
    return values.reshape(dim, dim)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def config_digest(data: Any) -> str:
    """SHA-256 of the canonical JSON rendering of `data`."""
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()
