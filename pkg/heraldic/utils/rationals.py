from __future__ import annotations

from fractions import Fraction
from typing import Sequence

__all__: Sequence[str] = ("nearest_rational",)


def nearest_rational(
    value: float, max_denominator: int = 1000, tolerance: float = 1e-9
) -> Fraction | None:
    """
    The closest fraction with a denominator of at most `max_denominator`, or
    `None` when no such fraction lies within `tolerance` of `value`.

    ### Example
    ```python
    >>> nearest_rational(0.009259259259259259)
    Fraction(1, 108)
    ```
    """
    guess = Fraction(value).limit_denominator(max_denominator)
    if abs(float(guess) - value) > tolerance:
        return None
    return guess
