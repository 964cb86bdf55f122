from __future__ import annotations

from dataclasses import dataclass
from math import pi
from typing import TYPE_CHECKING, Any, Iterable, Sequence

import numpy as np

from heraldic.exceptions import DimensionError, InvalidCircuitError
from heraldic.internal import as_square, complex_from_pairs, complex_to_pairs

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix

__all__: Sequence[str] = (
    "TRIVIAL_TOLERANCE",
    "TwoModeElement",
    "PhaseLayer",
    "CircuitSpec",
    "element_matrix",
    "phase_element",
    "compose",
    "count_nontrivial",
    "rho_distance",
    "canonicalize",
)

TRIVIAL_TOLERANCE = 1e-6
"""Angles closer than this to 0 or pi/2 count as trivial."""

_RANGE_SLACK = 1e-12
_MODULUS_TOLERANCE = 1e-12


@dataclass(frozen=True)
class TwoModeElement:
    """
    A U(2) rotation on the ordered mode pair `(n, m)`.

    Inside rows and columns `(n, m)` the element acts as
    `[[e^{i phi} cos theta, -sin theta], [e^{i phi} sin theta, cos theta]]`,
    so an element with `theta = 0` is a phase shifter on mode `n`.
    """

    theta: float
    phi: float
    modes: tuple[int, int]

    def __post_init__(self) -> None:
        n, m = (int(i) for i in self.modes)
        object.__setattr__(self, "modes", (n, m))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))

        if n == m or n < 0 or m < 0:
            raise InvalidCircuitError(
                f"Element modes must be distinct and non-negative, got {self.modes}."
            )
        if not -_RANGE_SLACK <= self.theta <= pi / 2 + _RANGE_SLACK:
            raise InvalidCircuitError(f"`theta` = {self.theta!r} is outside [0, pi/2].")
        if not -pi - _RANGE_SLACK <= self.phi <= pi + _RANGE_SLACK:
            raise InvalidCircuitError(f"`phi` = {self.phi!r} is outside [-pi, pi].")

    def block(self) -> ComplexMatrix:
        c, s = np.cos(self.theta), np.sin(self.theta)
        phase = np.exp(1j * self.phi)
        return np.array([[phase * c, -s], [phase * s, c]], dtype=np.complex128)

    def is_trivial(self, tolerance: float = TRIVIAL_TOLERANCE) -> bool:
        return min(abs(self.theta), abs(self.theta - pi / 2)) <= tolerance

    def to_json(self) -> dict[str, Any]:
        return {"theta": self.theta, "phi": self.phi, "modes": list(self.modes)}

    @classmethod
    def from_json(cls, data: Any, *, field: str = "element") -> TwoModeElement:
        try:
            n, m = data["modes"]
            return cls(float(data["theta"]), float(data["phi"]), (int(n), int(m)))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidCircuitError(
                f"`{field}` needs numeric `theta`, `phi` and a pair of `modes`."
            ) from e


@dataclass(frozen=True)
class PhaseLayer:
    """The diagonal of pure phases applied after every element."""

    phases: tuple[complex, ...]

    def __post_init__(self) -> None:
        phases = tuple(complex(p) for p in self.phases)
        for k, p in enumerate(phases):
            if abs(abs(p) - 1) > _MODULUS_TOLERANCE:
                raise InvalidCircuitError(f"`phases[{k}]` has modulus {abs(p)!r}, not 1.")
        object.__setattr__(self, "phases", phases)

    @classmethod
    def identity(cls, dim: int) -> PhaseLayer:
        return cls((1 + 0j,) * dim)

    @classmethod
    def from_angles(cls, angles: Iterable[float]) -> PhaseLayer:
        return cls(tuple(complex(np.exp(1j * a)) for a in angles))

    @property
    def angles(self) -> npt.NDArray[np.float64]:
        return np.angle(np.array(self.phases, dtype=np.complex128))

    def as_array(self) -> npt.NDArray[np.complex128]:
        return np.array(self.phases, dtype=np.complex128)


@dataclass(frozen=True)
class CircuitSpec:
    """
    A circuit `D @ T_1 @ ... @ T_Q`.

    `elements[0]` is `T_1`, the left-most factor: light meets `elements[-1]`
    first and the phase layer `D` last.
    """

    dim: int
    elements: tuple[TwoModeElement, ...]
    output_phases: PhaseLayer

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        if self.dim < 1:
            raise DimensionError(f"`dim` must be positive, got {self.dim}.")
        if len(self.output_phases.phases) != self.dim:
            raise DimensionError(
                f"`phases` has {len(self.output_phases.phases)} entries, expected {self.dim}."
            )
        for i, element in enumerate(self.elements):
            if max(element.modes) >= self.dim:
                raise DimensionError(
                    f"`elements[{i}]` acts on modes {element.modes} but `dim` is {self.dim}."
                )

    @classmethod
    def from_physical_order(
        cls, dim: int, elements: Iterable[TwoModeElement], phases: PhaseLayer | None = None
    ) -> CircuitSpec:
        """Build a circuit from elements listed in the order light passes them."""
        return cls(dim, tuple(reversed(tuple(elements))), phases or PhaseLayer.identity(dim))

    def unitary(self) -> ComplexMatrix:
        return compose(self)

    def to_json(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "elements": [e.to_json() for e in self.elements],
            "phases": complex_to_pairs(self.output_phases.as_array()),
        }

    @classmethod
    def from_json(cls, data: Any) -> CircuitSpec:
        if not isinstance(data, dict) or not isinstance(data.get("dim"), int):
            raise DimensionError("A circuit document needs an integer `dim`.")
        dim = data["dim"]
        elements = tuple(
            TwoModeElement.from_json(e, field=f"elements[{i}]")
            for i, e in enumerate(data.get("elements", []))
        )
        if "phases" in data:
            phases = PhaseLayer(tuple(complex_from_pairs(data["phases"], field="phases")))
        else:
            phases = PhaseLayer.identity(dim)
        return cls(dim, elements, phases)


def element_matrix(element: TwoModeElement, dim: int) -> ComplexMatrix:
    n, m = element.modes
    if max(n, m) >= dim:
        raise DimensionError(f"Element on modes {element.modes} does not fit {dim} modes.")
    matrix = np.eye(dim, dtype=np.complex128)
    matrix[np.ix_((n, m), (n, m))] = element.block()
    return matrix


def phase_element(mode: int, phi: float, partner: int) -> TwoModeElement:
    """A `theta = 0` element shifting the phase of `mode` by `phi`. `partner` is untouched."""
    return TwoModeElement(0.0, float(np.angle(np.exp(1j * phi))), (mode, partner))


def _apply_left(element: TwoModeElement, matrix: ComplexMatrix) -> None:
    n, m = element.modes
    matrix[[n, m], :] = element.block() @ matrix[[n, m], :]


def compose(spec: CircuitSpec) -> ComplexMatrix:
    """
    The unitary `D @ T_1 @ ... @ T_Q` of a circuit.

    ### Example
    ```python
    spec = CircuitSpec(2, (TwoModeElement(pi / 4, 0, (0, 1)),), PhaseLayer.identity(2))
    compose(spec)  # [[1, -1], [1, 1]] / sqrt(2)
    ```
    """
    matrix = np.eye(spec.dim, dtype=np.complex128)
    for element in reversed(spec.elements):
        _apply_left(element, matrix)
    return spec.output_phases.as_array()[:, None] * matrix


def count_nontrivial(spec: CircuitSpec, tol: float = TRIVIAL_TOLERANCE) -> int:
    if tol <= 0:
        raise ValueError(f"`tol` must be positive, got {tol}.")
    return sum(1 for e in spec.elements if not e.is_trivial(tol))


def rho_distance(u: npt.ArrayLike, v: npt.ArrayLike) -> float:
    """`1 - Re Tr(U V^dagger) / d`: 0 for equal matrices, 2 for `V = -U`."""
    a, b = as_square(u, field="u"), as_square(v, field="v")
    if a.shape != b.shape:
        raise DimensionError(f"Cannot compare a {a.shape} matrix with a {b.shape} matrix.")
    return float(1 - np.real(np.trace(a @ b.conj().T)) / a.shape[0])


def canonicalize(
    dim: int, blocks: Sequence[tuple[float, float, tuple[int, int]]], phases: npt.ArrayLike
) -> CircuitSpec:
    """
    Bring free element angles into their canonical ranges.

    `blocks` lists `(theta, phi, modes)` with arbitrary real angles, in the
    same order as `CircuitSpec.elements`. Walking in the order light passes
    them, each block is rewritten as `diag(x, y) @ T(theta', phi')` with
    `theta'` in `[0, pi/2]`, and the left-over phases are pushed towards the
    output layer. The composed unitary is unchanged.
    """
    pending = np.array(phases, dtype=np.complex128).copy()
    # phases accumulated to the right of the block being processed
    carried = np.ones(dim, dtype=np.complex128)
    rewritten: list[TwoModeElement] = []

    for theta, phi, (n, m) in reversed(blocks):
        c, s = np.cos(theta), np.sin(theta)
        phase = np.exp(1j * phi)
        pn, pm = carried[n], carried[m]
        # the block times diag(pn, pm), column by column
        col_n = np.array([phase * c * pn, phase * s * pn])
        col_m = np.array([-s * pm, c * pm])

        new_s, new_c = abs(s), abs(c)
        new_theta = float(np.arctan2(new_s, new_c))
        if new_c < 1e-15:
            x = col_m[0] / -new_s
            y = col_n[1] / new_s
            new_phi = 0.0
        elif new_s < 1e-15:
            x = col_n[0] / new_c
            y = col_m[1] / new_c
            new_phi = 0.0
        else:
            x = col_m[0] / -new_s
            y = col_m[1] / new_c
            new_phi = float(np.angle(col_n[0] / (x * new_c)))

        carried[n], carried[m] = x, y
        rewritten.append(TwoModeElement(new_theta, new_phi, (n, m)))

    rewritten.reverse()
    layer = pending * carried
    layer = layer / np.abs(layer)
    return CircuitSpec(dim, tuple(rewritten), PhaseLayer(tuple(layer)))
