from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from heraldic.exceptions import ConfigError

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.circuit.elements import CircuitSpec
    from heraldic.typedefs import RealVector

__all__: Sequence[str] = ("CostParams", "simplicity_cost", "cost_terms")


@dataclass(frozen=True)
class CostParams:
    """
    Weights of the phase terms of the simplicity cost.

    Args:
        epsilon: Weight pushing element phases towards 0 or pi.
        delta: Weight pushing the output phases towards 1.
    """

    epsilon: float = 0.01
    delta: float = 0.01

    def __post_init__(self) -> None:
        if self.epsilon < 0 or self.delta < 0:
            raise ConfigError(
                f"`epsilon` and `delta` must be non-negative, got {self.epsilon}, {self.delta}."
            )


def cost_terms(
    thetas: npt.ArrayLike, phis: npt.ArrayLike, phase_angles: npt.ArrayLike, params: CostParams
) -> tuple[float, RealVector, RealVector, RealVector]:
    """The simplicity cost over raw angles, with its derivative in each group of angles."""
    t = np.asarray(thetas, dtype=np.float64)
    p = np.asarray(phis, dtype=np.float64)
    d = np.asarray(phase_angles, dtype=np.float64)

    value = (
        np.sum(1 - np.cos(4 * t))
        + params.epsilon * np.sum(1 - np.cos(2 * p))
        # |e^{i d} - 1|^2
        + params.delta * np.sum(2 - 2 * np.cos(d))
    )
    return (
        float(value),
        4 * np.sin(4 * t),
        2 * params.epsilon * np.sin(2 * p),
        2 * params.delta * np.sin(d),
    )


def simplicity_cost(spec: CircuitSpec, params: CostParams | None = None) -> float:
    """
    Penalty that vanishes exactly on circuits built from trivial elements
    (`theta` in {0, pi/2}, `phi` in {0, +-pi}) and a unit phase layer.

    ### Example
    ```python
    simplicity_cost(CircuitSpec(2, (TwoModeElement(pi / 4, 0, (0, 1)),), PhaseLayer.identity(2)))
    # 2.0
    ```
    """
    params = params or CostParams()
    thetas = [e.theta for e in spec.elements]
    phis = [e.phi for e in spec.elements]
    phases = spec.output_phases.as_array()
    value = cost_terms(thetas, phis, [], params)[0]
    return value + params.delta * float(np.sum(np.abs(phases - 1) ** 2))
