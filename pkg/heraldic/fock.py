from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from logging import getLogger
from typing import TYPE_CHECKING, Any, Iterable, Mapping, Sequence, Union

import numpy as np

from heraldic.exceptions import DimensionError, InvalidStateError, SectorMismatchError
from heraldic.internal import (
    AmplitudeMap,
    as_square,
    batched_permanents,
    complex_from_pairs,
    complex_to_pairs,
    ensure_unitary,
)

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.typedefs import ComplexMatrix, ComplexVector, RealVector

__all__: Sequence[str] = (
    "ZERO_PROBABILITY",
    "FockState",
    "TargetState",
    "ProblemSpec",
    "HeraldReport",
    "enumerate_fock_states",
    "herald_patterns",
    "permanent",
    "transition_amplitude",
    "output_amplitudes",
    "evolve_state",
    "herald_analysis",
    "state_fidelity",
)

_log = getLogger(__name__)

ZERO_PROBABILITY = 1e-14
"""Herald probabilities below this value are treated as exactly zero."""

_NORM_TOLERANCE = 1e-12
_HERALD_UNITARITY_TOLERANCE = 1e-8


@dataclass(frozen=True)
class FockState:
    """
    Photon numbers per optical mode.

    ### Example
    ```python
    state = FockState((1, 0, 1))
    state.n_photons  # 2
    str(state)  # "|101>"
    ```
    """

    occupations: tuple[int, ...]

    def __post_init__(self) -> None:
        try:
            occupations = tuple(int(n) for n in self.occupations)
        except (TypeError, ValueError) as e:
            raise InvalidStateError(
                f"Occupations must be integers, got {self.occupations!r}."
            ) from e

        if any(n < 0 for n in occupations):
            raise InvalidStateError(f"Occupations must be non-negative, got {occupations}.")
        object.__setattr__(self, "occupations", occupations)

    @classmethod
    def of(cls, *occupations: int) -> FockState:
        return cls(occupations)

    @property
    def n_modes(self) -> int:
        return len(self.occupations)

    @property
    def n_photons(self) -> int:
        return sum(self.occupations)

    @property
    def label(self) -> str:
        if all(n < 10 for n in self.occupations):
            return "".join(str(n) for n in self.occupations)
        return ",".join(str(n) for n in self.occupations)

    def concat(self, other: FockState) -> FockState:
        return FockState(self.occupations + other.occupations)

    def split(self, n_modes: int) -> tuple[FockState, FockState]:
        return FockState(self.occupations[:n_modes]), FockState(self.occupations[n_modes:])

    def to_json(self) -> list[int]:
        return list(self.occupations)

    @classmethod
    def from_json(cls, data: Any, *, field: str = "state") -> FockState:
        if not isinstance(data, list) or not all(
            isinstance(n, int) and not isinstance(n, bool) for n in data
        ):
            raise InvalidStateError(f"`{field}` must be a JSON array of integers, got {data!r}.")
        return cls(tuple(data))

    def __str__(self) -> str:
        return f"|{self.label}>"


StateLike = Union[FockState, Sequence[int]]


def _as_fock(state: StateLike) -> FockState:
    if isinstance(state, FockState):
        return state
    return FockState(tuple(state))


@dataclass(frozen=True)
class TargetState:
    """A normalized superposition of distinct Fock states sharing one mode and photon sector."""

    terms: tuple[tuple[FockState, complex], ...]
    label: str = ""

    def __post_init__(self) -> None:
        terms = tuple((_as_fock(state), complex(amplitude)) for state, amplitude in self.terms)
        if not terms:
            raise InvalidStateError("A target state needs at least one term.")

        states = [state for state, _ in terms]
        if len(set(states)) != len(states):
            raise InvalidStateError(f"Target `{self.label}` repeats a Fock state.")

        first = states[0]
        for state in states[1:]:
            if state.n_modes != first.n_modes:
                raise DimensionError(
                    f"Target `{self.label}` mixes states over {first.n_modes}"
                    f" and {state.n_modes} modes."
                )
            if state.n_photons != first.n_photons:
                raise InvalidStateError(
                    f"Target `{self.label}` mixes {first.n_photons} and"
                    f" {state.n_photons} photon states."
                )

        norm = sum(abs(amplitude) ** 2 for _, amplitude in terms)
        if abs(norm - 1) > _NORM_TOLERANCE:
            raise InvalidStateError(f"Target `{self.label}` has squared norm {norm!r}, not 1.")

        object.__setattr__(self, "terms", terms)

    @classmethod
    def superposition(
        cls,
        terms: Iterable[tuple[StateLike, complex]],
        label: str = "",
        *,
        cutoff: float = 1e-15,
    ) -> TargetState:
        """Build a target from unnormalized terms, dropping negligible amplitudes."""
        kept = [(_as_fock(state), complex(a)) for state, a in terms if abs(a) > cutoff]
        norm = np.sqrt(sum(abs(a) ** 2 for _, a in kept))
        if norm == 0:
            raise InvalidStateError(f"Target `{label}` has no non-zero terms.")
        return cls(tuple((state, a / norm) for state, a in kept), label)

    @classmethod
    def from_vector(
        cls, vector: npt.ArrayLike, basis: Sequence[FockState], label: str = ""
    ) -> TargetState:
        values = np.asarray(vector, dtype=np.complex128)
        return cls.superposition(zip(basis, values), label)

    @property
    def n_modes(self) -> int:
        return self.terms[0][0].n_modes

    @property
    def n_photons(self) -> int:
        return self.terms[0][0].n_photons

    def vector(self, basis: Sequence[FockState]) -> ComplexVector:
        """Amplitudes over `basis`. Every term must be a member of the basis."""
        index = {state: i for i, state in enumerate(basis)}
        out = np.zeros(len(basis), dtype=np.complex128)
        for state, amplitude in self.terms:
            position = index.get(state)
            if position is None:
                raise SectorMismatchError(
                    f"Target `{self.label}` has term {state} outside of the given basis."
                )
            out[position] = amplitude
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "terms": [
                {"state": state.to_json(), "amplitude": [amplitude.real, amplitude.imag]}
                for state, amplitude in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data: Any) -> TargetState:
        if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
            raise InvalidStateError("A target needs a `terms` array.")

        label = str(data.get("label", ""))
        terms: list[tuple[FockState, complex]] = []
        for i, term in enumerate(data["terms"]):
            if not isinstance(term, dict) or "state" not in term or "amplitude" not in term:
                raise InvalidStateError(
                    f"Term {i} of target `{label}` needs `state` and `amplitude`."
                )
            (amplitude,) = complex_from_pairs([term["amplitude"]], field=f"terms[{i}].amplitude")
            state = FockState.from_json(term["state"], field=f"terms[{i}].state")
            terms.append((state, complex(amplitude)))

        if data.get("normalize", False):
            return cls.superposition(terms, label)
        return cls(tuple(terms), label)


@lru_cache(maxsize=None)
def _occupations(n_modes: int, n_photons: int) -> tuple[tuple[int, ...], ...]:
    if n_modes == 0:
        return ((),) if n_photons == 0 else ()
    if n_modes == 1:
        return ((n_photons,),)
    return tuple(
        (first, *rest)
        for first in range(n_photons, -1, -1)
        for rest in _occupations(n_modes - 1, n_photons - first)
    )


def enumerate_fock_states(n_modes: int, n_photons: int) -> list[FockState]:
    """
    Every occupation of `n_modes` modes with `n_photons` photons, in
    lexicographically descending order.

    ### Example
    ```python
    enumerate_fock_states(2, 1)  # [|10>, |01>]
    ```
    """
    if n_modes < 1:
        raise DimensionError(f"`n_modes` must be at least 1, got {n_modes}.")
    if n_photons < 0:
        raise InvalidStateError(f"`n_photons` must be non-negative, got {n_photons}.")
    return [FockState(occupation) for occupation in _occupations(n_modes, n_photons)]


def herald_patterns(
    n_modes: int, n_photons: int, max_occupation: int | None = None
) -> list[FockState]:
    """Ancilla patterns with `n_photons` photons, optionally capping every mode's occupation."""
    states = enumerate_fock_states(n_modes, n_photons)
    if max_occupation is None:
        return states
    return [s for s in states if max(s.occupations, default=0) <= max_occupation]


@dataclass(frozen=True)
class ProblemSpec:
    """
    A heralding problem: `n_target_modes` modes carry the produced state and
    the remaining `n_ancilla_modes` are measured.

    Targets whose photon number does not fit the target sector are allowed.
    They can never be heralded and contribute zero overlap everywhere.
    """

    n_target_modes: int
    n_ancilla_modes: int
    input: FockState
    ancilla_patterns: tuple[FockState, ...] = ()
    targets: tuple[TargetState, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "input", _as_fock(self.input))
        object.__setattr__(
            self, "ancilla_patterns", tuple(_as_fock(p) for p in self.ancilla_patterns)
        )
        object.__setattr__(self, "targets", tuple(self.targets))

        if self.n_target_modes < 1 or self.n_ancilla_modes < 0:
            raise DimensionError(
                f"Need at least one target mode and a non-negative number of ancilla modes,"
                f" got {self.n_target_modes} and {self.n_ancilla_modes}."
            )
        if self.input.n_modes != self.n_modes:
            raise DimensionError(
                f"`input` spans {self.input.n_modes} modes, expected"
                f" {self.n_target_modes} + {self.n_ancilla_modes}."
            )

        if not self.ancilla_patterns and self.n_ancilla_modes == 0:
            object.__setattr__(self, "ancilla_patterns", (FockState(()),))

        for i, pattern in enumerate(self.ancilla_patterns):
            if pattern.n_modes != self.n_ancilla_modes:
                raise DimensionError(
                    f"`ancilla_patterns[{i}]` spans {pattern.n_modes} modes, expected"
                    f" {self.n_ancilla_modes}."
                )
        if len({p.n_photons for p in self.ancilla_patterns}) > 1:
            raise InvalidStateError("Every ancilla pattern must carry the same number of photons.")
        if len(set(self.ancilla_patterns)) != len(self.ancilla_patterns):
            raise InvalidStateError("`ancilla_patterns` contains duplicates.")
        if self.target_photons < 0:
            raise InvalidStateError(
                f"Ancilla patterns carry {self.ancilla_photons} photons but the input only has"
                f" {self.input.n_photons}."
            )

        for i, target in enumerate(self.targets):
            if target.n_modes != self.n_target_modes:
                raise DimensionError(
                    f"`targets[{i}]` spans {target.n_modes} modes, expected {self.n_target_modes}."
                )

    @property
    def n_modes(self) -> int:
        return self.n_target_modes + self.n_ancilla_modes

    @property
    def ancilla_photons(self) -> int:
        if not self.ancilla_patterns:
            return 0
        return self.ancilla_patterns[0].n_photons

    @property
    def target_photons(self) -> int:
        return self.input.n_photons - self.ancilla_photons

    @property
    def sector_consistent(self) -> bool:
        """Whether every target carries exactly the photons left over after heralding."""
        return all(t.n_photons == self.target_photons for t in self.targets)

    @cached_property
    def target_basis(self) -> tuple[FockState, ...]:
        return tuple(enumerate_fock_states(self.n_target_modes, self.target_photons))

    @cached_property
    def target_matrix(self) -> npt.NDArray[np.complex128]:
        """Target amplitudes over `target_basis`, one row per target, zero rows off-sector."""
        matrix = np.zeros((len(self.targets), len(self.target_basis)), dtype=np.complex128)
        for i, target in enumerate(self.targets):
            if target.n_photons == self.target_photons:
                matrix[i] = target.vector(self.target_basis)
        return matrix

    @cached_property
    def amplitude_map(self) -> AmplitudeMap:
        outputs = tuple(
            m.occupations + a.occupations for a in self.ancilla_patterns for m in self.target_basis
        )
        return AmplitudeMap(self.input.occupations, outputs)

    def pattern_index(self, pattern: StateLike) -> int:
        fock = _as_fock(pattern)
        try:
            return self.ancilla_patterns.index(fock)
        except ValueError:
            raise InvalidStateError(f"{fock} is not one of the ancilla patterns.") from None

    def target_index(self, target: int | str) -> int:
        if isinstance(target, int):
            if not 0 <= target < len(self.targets):
                raise InvalidStateError(f"Target index {target} out of range.")
            return target
        for i, t in enumerate(self.targets):
            if t.label == target:
                return i
        raise InvalidStateError(f"No target labelled `{target}`.")

    def herald_amplitudes(self, unitary: ComplexMatrix) -> npt.NDArray[np.complex128]:
        """Unnormalized amplitudes with shape `(n_patterns, len(target_basis))`."""
        values = self.amplitude_map.amplitudes(unitary)
        return values.reshape(len(self.ancilla_patterns), len(self.target_basis))

    def to_json(self) -> dict[str, Any]:
        return {
            "n_target_modes": self.n_target_modes,
            "n_ancilla_modes": self.n_ancilla_modes,
            "input": self.input.to_json(),
            "ancilla_patterns": [p.to_json() for p in self.ancilla_patterns],
            "targets": [t.to_json() for t in self.targets],
        }


@dataclass(frozen=True, eq=False)
class HeraldReport:
    """
    Outcome of measuring the ancilla modes.

    `probabilities[a]` is the probability of ancilla pattern `a`,
    `overlaps[t, a]` the fidelity of the state heralded by `a` with target `t`
    and `states[a]` that heralded state over `basis`. Zero-probability
    patterns carry zero overlaps and a zero state.
    """

    patterns: tuple[FockState, ...]
    basis: tuple[FockState, ...]
    target_labels: tuple[str, ...]
    probabilities: RealVector
    overlaps: npt.NDArray[np.float64]
    states: npt.NDArray[np.complex128]
    _index: dict[FockState, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.patterns)})

    @property
    def pattern_probabilities(self) -> dict[FockState, float]:
        return {p: float(self.probabilities[i]) for i, p in enumerate(self.patterns)}

    @property
    def heralded_states(self) -> dict[FockState, ComplexVector]:
        return {p: self.states[i] for i, p in enumerate(self.patterns)}

    def pattern_index(self, pattern: StateLike) -> int:
        fock = _as_fock(pattern)
        if fock not in self._index:
            raise InvalidStateError(f"{fock} is not a pattern of this report.")
        return self._index[fock]

    def probability(self, pattern: StateLike) -> float:
        return float(self.probabilities[self.pattern_index(pattern)])

    def overlap(self, target: int, pattern: StateLike) -> float:
        return float(self.overlaps[target, self.pattern_index(pattern)])

    def heralded_state(self, pattern: StateLike) -> ComplexVector:
        return self.states[self.pattern_index(pattern)]

    def success_probability(self, patterns: Iterable[StateLike] | None = None) -> float:
        if patterns is None:
            return float(np.sum(self.probabilities))
        return float(sum(self.probability(p) for p in patterns))

    def to_json(self) -> dict[str, Any]:
        return {
            "basis": [state.to_json() for state in self.basis],
            "targets": list(self.target_labels),
            "patterns": [
                {
                    "pattern": pattern.to_json(),
                    "probability": float(self.probabilities[i]),
                    "heralded_state": complex_to_pairs(self.states[i]),
                }
                for i, pattern in enumerate(self.patterns)
            ],
            "overlaps": [[float(v) for v in row] for row in self.overlaps],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> HeraldReport:
        basis = tuple(FockState.from_json(s, field="basis") for s in data["basis"])
        entries = data["patterns"]
        patterns = tuple(FockState.from_json(e["pattern"], field="pattern") for e in entries)
        states = np.zeros((len(patterns), len(basis)), dtype=np.complex128)
        for i, entry in enumerate(entries):
            states[i] = complex_from_pairs(entry["heralded_state"], field="heralded_state")
        return cls(
            patterns=patterns,
            basis=basis,
            target_labels=tuple(data.get("targets", ())),
            probabilities=np.array([e["probability"] for e in entries], dtype=np.float64),
            overlaps=np.array(data["overlaps"], dtype=np.float64).reshape(-1, len(patterns)),
            states=states,
        )


def permanent(matrix: npt.ArrayLike) -> complex:
    """
    Permanent of a square matrix. The empty matrix has permanent 1.

    ### Example
    ```python
    permanent([[a, b], [c, d]])  # a * d + b * c
    ```
    """
    array = np.asarray(matrix, dtype=np.complex128)
    if array.size == 0 and array.ndim in (1, 2):
        array = array.reshape(0, 0)
    square = as_square(array)
    return complex(batched_permanents(square))


def _check_modes(unitary: ComplexMatrix, *states: FockState) -> None:
    for state in states:
        if state.n_modes != unitary.shape[0]:
            raise DimensionError(
                f"{state} spans {state.n_modes} modes but the unitary acts on"
                f" {unitary.shape[0]}."
            )


def transition_amplitude(unitary: npt.ArrayLike, input: StateLike, output: StateLike) -> complex:
    """
    `<output| U |input>` for the photon-number states `input` and `output`.

    Column `k` of `U` is the image of the creation operator of mode `k`. The
    amplitude vanishes when the photon numbers differ.
    """
    matrix = as_square(unitary, field="unitary")
    source, sink = _as_fock(input), _as_fock(output)
    _check_modes(matrix, source, sink)
    if source.n_photons != sink.n_photons:
        return 0j
    mapping = AmplitudeMap(source.occupations, (sink.occupations,))
    return complex(mapping.amplitudes(matrix)[0])


def output_amplitudes(
    unitary: npt.ArrayLike, input: StateLike, outputs: Sequence[StateLike]
) -> ComplexVector:
    """`transition_amplitude` for many outputs of the same photon number at once."""
    matrix = as_square(unitary, field="unitary")
    source = _as_fock(input)
    sinks = [_as_fock(o) for o in outputs]
    _check_modes(matrix, source, *sinks)
    values = np.zeros(len(sinks), dtype=np.complex128)
    matching = [i for i, s in enumerate(sinks) if s.n_photons == source.n_photons]
    if matching:
        mapping = AmplitudeMap(source.occupations, tuple(sinks[i].occupations for i in matching))
        values[matching] = mapping.amplitudes(matrix)
    return values


def evolve_state(
    unitary: npt.ArrayLike, amplitudes: npt.ArrayLike, basis: Sequence[StateLike]
) -> ComplexVector:
    """Push the superposition `sum_i amplitudes[i] |basis[i]>` through the unitary."""
    matrix = as_square(unitary, field="unitary")
    weights = np.asarray(amplitudes, dtype=np.complex128)
    states = [_as_fock(s) for s in basis]
    if weights.shape != (len(states),):
        raise DimensionError(f"Got {weights.size} amplitudes for a basis of {len(states)} states.")

    out = np.zeros(len(states), dtype=np.complex128)
    for weight, state in zip(weights, states):
        if weight != 0:
            out += weight * output_amplitudes(matrix, state, states)
    return out


def herald_analysis(unitary: npt.ArrayLike, spec: ProblemSpec) -> HeraldReport:
    """
    Measure every ancilla pattern of `spec` after sending its input through `unitary`.

    ### Example
    ```python
    report = herald_analysis(compose(ghz_scheme()), ghz_problem())
    report.probability((1, 1, 1, 0))  # 1 / 108
    ```
    """
    matrix = ensure_unitary(unitary, _HERALD_UNITARITY_TOLERANCE, field="unitary")
    if matrix.shape[0] != spec.n_modes:
        raise DimensionError(
            f"The unitary acts on {matrix.shape[0]} modes but the problem has {spec.n_modes}."
        )

    amplitudes = spec.herald_amplitudes(matrix)
    probabilities = np.sum(np.abs(amplitudes) ** 2, axis=1)
    heralding = probabilities >= ZERO_PROBABILITY

    states = np.zeros_like(amplitudes)
    states[heralding] = amplitudes[heralding] / np.sqrt(probabilities[heralding])[:, None]

    overlaps = np.zeros((len(spec.targets), len(spec.ancilla_patterns)), dtype=np.float64)
    if spec.targets:
        projections = spec.target_matrix.conj() @ states.T
        overlaps = np.abs(projections) ** 2
        overlaps[:, ~heralding] = 0.0

    _log.debug(
        "Heralded %d of %d patterns, total probability %.12g",
        int(np.count_nonzero(heralding)),
        len(spec.ancilla_patterns),
        float(np.sum(probabilities)),
    )
    return HeraldReport(
        patterns=spec.ancilla_patterns,
        basis=spec.target_basis,
        target_labels=tuple(t.label for t in spec.targets),
        probabilities=probabilities,
        overlaps=overlaps,
        states=states,
    )


def state_fidelity(
    state_a: npt.ArrayLike, state_b: TargetState, basis: Sequence[StateLike] | None = None
) -> float:
    """
    `|<b|a>|^2` for an amplitude vector `a` and a target `b`.

    Without `basis` the vector is read over the full sector of `state_b`, in
    `enumerate_fock_states` order.
    """
    vector = np.asarray(state_a, dtype=np.complex128)
    states = (
        enumerate_fock_states(state_b.n_modes, state_b.n_photons)
        if basis is None
        else [_as_fock(s) for s in basis]
    )
    if vector.shape != (len(states),):
        raise SectorMismatchError(
            f"State has {vector.size} amplitudes but the sector of `{state_b.label}` holds"
            f" {len(states)} Fock states."
        )
    if any(s.n_modes != state_b.n_modes or s.n_photons != state_b.n_photons for s in states):
        raise SectorMismatchError(
            f"The basis does not match the {state_b.n_modes}-mode {state_b.n_photons}-photon"
            f" sector of `{state_b.label}`."
        )
    overlap = np.vdot(state_b.vector(states), vector)
    return min(1.0, float(abs(overlap) ** 2))
