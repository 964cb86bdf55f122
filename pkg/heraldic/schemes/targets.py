from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Sequence

from heraldic.exceptions import InvalidStateError
from heraldic.fock import FockState, TargetState, herald_patterns

__all__: Sequence[str] = (
    "ghz_targets",
    "ghz_canonical_targets",
    "NamedBellState",
    "BELL_LABELS",
    "bell_targets",
    "bell_state",
)

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-", "chi+", "chi-")
"""Labels of the dual-rail Bell states, in the order `bell_targets` returns them."""

_GHZ_MODES = 6
_GHZ_PHOTONS = 3


def _complement(state: FockState) -> FockState:
    return FockState(tuple(1 - n for n in state.occupations))


def _pair(state: FockState, sign: int) -> TargetState:
    prefix = "+" if sign > 0 else "-"
    amplitude = 1 / sqrt(2)
    return TargetState(
        ((state, amplitude), (_complement(state), sign * amplitude)), f"{prefix}{state.label}"
    )


def ghz_targets() -> list[TargetState]:
    """
    Every `(|x> + |~x>) / sqrt(2)` and `(|x> - |~x>) / sqrt(2)` over three
    photons in six modes with at most one photon per mode, `~x` being the
    complement of `x`. Each complementary pair appears once, led by the
    member that occupies mode 0.
    """
    states = herald_patterns(_GHZ_MODES, _GHZ_PHOTONS, max_occupation=1)
    return [
        _pair(state, sign) for state in states if state.occupations[0] == 1 for sign in (1, -1)
    ]


def ghz_canonical_targets() -> list[TargetState]:
    """The two GHZ states the 12-element scheme heralds: `+101010` and `-101010`."""
    state = FockState((1, 0, 1, 0, 1, 0))
    return [_pair(state, 1), _pair(state, -1)]


@dataclass(frozen=True)
class NamedBellState:
    """A dual-rail Bell state over the modes `(a0, a1, b0, b1)`."""

    label: str
    state: TargetState


# a0 a1 b0 b1 occupations of the two terms
_BELL_TERMS = {
    "phi": ((1, 0, 1, 0), (0, 1, 0, 1)),
    "psi": ((1, 0, 0, 1), (0, 1, 1, 0)),
    "chi": ((1, 1, 0, 0), (0, 0, 1, 1)),
}


def bell_state(label: str) -> TargetState:
    """
    ### Example
    ```python
    bell_state("psi-")  # (|1001> - |0110>) / sqrt(2)
    ```
    """
    if label not in BELL_LABELS:
        raise InvalidStateError(
            f"Unknown Bell state `{label}`, expected one of {', '.join(BELL_LABELS)}."
        )
    first, second = _BELL_TERMS[label[:-1]]
    sign = 1 if label.endswith("+") else -1
    amplitude = 1 / sqrt(2)
    terms = ((FockState(first), amplitude), (FockState(second), sign * amplitude))
    return TargetState(terms, label)


def bell_targets() -> list[NamedBellState]:
    return [NamedBellState(label, bell_state(label)) for label in BELL_LABELS]
