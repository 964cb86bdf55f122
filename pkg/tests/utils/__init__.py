from typing import Sequence

from tests.utils.matrices import (
    finite_difference,
    random_complex,
    random_hermitian,
    random_unitary,
    toy_problem,
)
from tests.utils.permanent import naive_permanent

__all__: Sequence[str] = (
    "naive_permanent",
    "random_complex",
    "random_hermitian",
    "random_unitary",
    "finite_difference",
    "toy_problem",
)
