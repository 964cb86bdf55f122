from typing import Sequence

from .amplitudes import *
from .linalg import *
from .permanent import *
from .serialization import *

__all__: Sequence[str] = (
    "batched_permanents",
    "AmplitudeMap",
    "repeated_modes",
    "fock_norm",
    "as_square",
    "unitarity_deviation",
    "ensure_unitary",
    "complex_to_pairs",
    "complex_from_pairs",
    "matrix_to_json",
    "matrix_from_json",
    "canonical_json",
    "config_digest",
)
