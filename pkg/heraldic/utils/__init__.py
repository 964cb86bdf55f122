from __future__ import annotations

from typing import Sequence

from heraldic.utils.rationals import *
from heraldic.utils.seeds import *

__all__: Sequence[str] = (
    "nearest_rational",
    "splitmix64",
    "restart_seed",
)
