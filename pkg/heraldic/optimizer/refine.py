from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from logging import getLogger
from math import pi
from typing import TYPE_CHECKING, Any, Mapping, Sequence

import numpy as np

from heraldic.circuit.clements import clements_decompose
from heraldic.circuit.cost import CostParams, cost_terms, simplicity_cost
from heraldic.circuit.elements import (
    CircuitSpec,
    PhaseLayer,
    TwoModeElement,
    canonicalize,
    compose,
    count_nontrivial,
)
from heraldic.exceptions import ConfigError, DimensionError
from heraldic.fock import FockState, herald_analysis
from heraldic.optimizer.bfgs import BFGSOptions, bfgs_minimize
from heraldic.optimizer.objective import HeraldConstraint, evaluate_constraints

if TYPE_CHECKING:
    import numpy.typing as npt

    from heraldic.fock import ProblemSpec
    from heraldic.optimizer.search import Candidate
    from heraldic.typedefs import ComplexMatrix, PatternT, RealVector

__all__: Sequence[str] = (
    "Stage2Config",
    "OuterIteration",
    "RefinementResult",
    "circuit_parameters",
    "circuit_gradient",
    "stage2_refine",
)

_log = getLogger(__name__)

_ZERO_COST = 1e-14


@dataclass(frozen=True)
class Stage2Config:
    """
    Args:
        cost_params: Weights of the simplicity cost.
        probability_floor: Lower bound on the herald probability per pattern.
            Patterns that are missing default to the candidate's own probability.
        constraint_tolerance: Allowed shortfall on every probability and fidelity bound.
        penalty_schedule: Penalty weights of the successive outer iterations.
            The last weight is reused when there are more iterations than weights.
        max_outer_iterations: Number of augmented Lagrangian updates.
        max_inner_iterations: BFGS iteration budget per outer iteration.
        snap_tolerance: Angles this close to a trivial value are snapped onto it
            whenever the snapped circuit stays feasible.
    """

    cost_params: CostParams = field(default_factory=CostParams)
    probability_floor: Mapping[PatternT, float] = field(default_factory=dict)
    constraint_tolerance: float = 1e-8
    penalty_schedule: tuple[float, ...] = (10.0, 100.0, 1e3, 1e4, 1e5)
    max_outer_iterations: int = 5
    max_inner_iterations: int = 2000
    snap_tolerance: float = 1e-4

    def __post_init__(self) -> None:
        floors = {tuple(int(n) for n in k): float(v) for k, v in self.probability_floor.items()}
        object.__setattr__(self, "probability_floor", floors)
        schedule = tuple(float(m) for m in self.penalty_schedule)
        object.__setattr__(self, "penalty_schedule", schedule)

        for pattern, floor in floors.items():
            if not 0 < floor <= 1:
                raise ConfigError(
                    f"`probability_floor` of {pattern} must lie in (0, 1], got {floor}."
                )
        if self.constraint_tolerance <= 0:
            raise ConfigError(
                f"`constraint_tolerance` must be positive, got {self.constraint_tolerance}."
            )
        increasing = all(b > a for a, b in zip(schedule, schedule[1:]))
        if not schedule or schedule[0] <= 0 or not increasing:
            raise ConfigError("`penalty_schedule` must be an increasing list of positive weights.")
        if self.max_outer_iterations < 1:
            raise ConfigError(
                f"`max_outer_iterations` must be at least 1, got {self.max_outer_iterations}."
            )
        if self.max_inner_iterations < 0:
            raise ConfigError("`max_inner_iterations` must be non-negative.")
        if self.snap_tolerance < 0:
            raise ConfigError(f"`snap_tolerance` must be non-negative, got {self.snap_tolerance}.")

    def penalty(self, iteration: int) -> float:
        return self.penalty_schedule[min(iteration, len(self.penalty_schedule) - 1)]

    def to_json(self) -> dict[str, Any]:
        return {
            "epsilon": self.cost_params.epsilon,
            "delta": self.cost_params.delta,
            "probability_floor": [
                {"pattern": list(p), "floor": f} for p, f in self.probability_floor.items()
            ],
            "constraint_tolerance": self.constraint_tolerance,
            "penalty_schedule": list(self.penalty_schedule),
            "max_outer_iterations": self.max_outer_iterations,
            "max_inner_iterations": self.max_inner_iterations,
            "snap_tolerance": self.snap_tolerance,
        }


@dataclass(frozen=True)
class OuterIteration:
    penalty: float
    violated: int
    cost: float
    accepted: bool


@dataclass(frozen=True, eq=False)
class RefinementResult:
    """
    Outcome of a refinement. `residuals` maps every constraint to its
    shortfall beyond the tolerance, zero when it holds.
    """

    circuit: CircuitSpec
    feasible: bool
    residuals: Mapping[str, float]
    nontrivial: int
    cost: float
    history: tuple[OuterIteration, ...] = ()

    def to_json(self) -> dict[str, Any]:
        return {
            "feasible": self.feasible,
            "nontrivial": self.nontrivial,
            "cost": self.cost,
            "residuals": dict(self.residuals),
            "history": [
                {
                    "penalty": h.penalty,
                    "violated": h.violated,
                    "cost": h.cost,
                    "accepted": h.accepted,
                }
                for h in self.history
            ],
            "circuit": self.circuit.to_json(),
        }


@dataclass(frozen=True, eq=False)
class _Layout:
    """Fixed mode pairs of a circuit whose angles are being refined."""

    dim: int
    modes: tuple[tuple[int, int], ...]

    @property
    def n_elements(self) -> int:
        return len(self.modes)

    def split(self, x: RealVector) -> tuple[RealVector, RealVector, RealVector]:
        q = self.n_elements
        return x[:q], x[q : 2 * q], x[2 * q :]


def circuit_parameters(circuit: CircuitSpec) -> RealVector:
    """`(theta_1..theta_Q, phi_1..phi_Q, delta_1..delta_d)` of a circuit."""
    return np.concatenate(
        [
            [e.theta for e in circuit.elements],
            [e.phi for e in circuit.elements],
            circuit.output_phases.angles,
        ]
    ).astype(np.float64)


def _blocks(thetas: RealVector, phis: RealVector) -> npt.NDArray[np.complex128]:
    c, s = np.cos(thetas), np.sin(thetas)
    phase = np.exp(1j * phis)
    return np.stack(
        [np.stack([phase * c, -s + 0j], axis=-1), np.stack([phase * s, c + 0j], axis=-1)], axis=-2
    )


def _unitary(layout: _Layout, x: RealVector) -> ComplexMatrix:
    thetas, phis, deltas = layout.split(x)
    matrix = np.eye(layout.dim, dtype=np.complex128)
    for (n, m), block in zip(reversed(layout.modes), reversed(_blocks(thetas, phis))):
        matrix[[n, m], :] = block @ matrix[[n, m], :]
    return np.exp(1j * deltas)[:, None] * matrix


def circuit_gradient(circuit: CircuitSpec, gamma: ComplexMatrix) -> RealVector:
    """
    Gradient over the circuit parameters of a real function `F(U)` with
    holomorphic sensitivity `gamma`, so that `dF = 2 Re sum(gamma * dU)`.
    """
    layout = _Layout(circuit.dim, tuple(e.modes for e in circuit.elements))
    return _circuit_gradient(layout, circuit_parameters(circuit), gamma)


def _circuit_gradient(layout: _Layout, x: RealVector, gamma: ComplexMatrix) -> RealVector:
    thetas, phis, deltas = layout.split(x)
    blocks = _blocks(thetas, phis)
    q, dim = layout.n_elements, layout.dim

    # left[i] = D T_1 ... T_i and right[i] = T_{i+1} ... T_Q
    left = [np.diag(np.exp(1j * deltas)).astype(np.complex128)]
    for (n, m), block in zip(layout.modes, blocks):
        nxt = left[-1].copy()
        nxt[:, [n, m]] = nxt[:, [n, m]] @ block
        left.append(nxt)
    right = [np.eye(dim, dtype=np.complex128)]
    for (n, m), block in zip(reversed(layout.modes), reversed(blocks)):
        nxt = right[-1].copy()
        nxt[[n, m], :] = block @ nxt[[n, m], :]
        right.append(nxt)
    right.reverse()

    gamma_t = gamma.T
    c, s = np.cos(thetas), np.sin(thetas)
    phase = np.exp(1j * phis)
    d_theta = np.zeros(q)
    d_phi = np.zeros(q)
    for i, (n, m) in enumerate(layout.modes):
        pair = [n, m]
        # dF = 2 Re Tr(X dT) restricted to the (n, m) block
        x_block = right[i + 1][pair, :] @ gamma_t @ left[i][:, pair]
        dt_theta = np.array([[-phase[i] * s[i], -c[i]], [phase[i] * c[i], -s[i]]])
        dt_phi = np.array([[1j * phase[i] * c[i], 0], [1j * phase[i] * s[i], 0]])
        d_theta[i] = 2 * np.real(np.sum(x_block.T * dt_theta))
        d_phi[i] = 2 * np.real(np.sum(x_block.T * dt_phi))

    unitary = left[-1]
    d_delta = -2 * np.imag(np.sum(gamma * unitary, axis=1))
    return np.concatenate([d_theta, d_phi, d_delta])


@dataclass(frozen=True, eq=False)
class _Problem:
    spec: ProblemSpec
    layout: _Layout
    constraints: tuple[HeraldConstraint, ...]
    params: CostParams
    tolerance: float

    def margins(
        self, x: RealVector
    ) -> tuple[RealVector, npt.NDArray[np.complex128], ComplexMatrix]:
        """Constraint values `c <= 0` (probabilities first), their amplitude weights and U."""
        unitary = _unitary(self.layout, x)
        values = evaluate_constraints(unitary, self.spec, self.constraints)
        floors = np.array([c.floor for c in self.constraints])
        half = self.tolerance / 2
        margins = np.concatenate(
            [(floors - half) - values.probabilities, (1 - half) - values.fidelities]
        )
        weights = -np.concatenate([values.probability_weights, values.fidelity_weights])
        return margins, weights, unitary

    def cost(self, x: RealVector) -> tuple[float, RealVector]:
        thetas, phis, deltas = self.layout.split(x)
        value, d_theta, d_phi, d_delta = cost_terms(thetas, phis, deltas, self.params)
        return value, np.concatenate([d_theta, d_phi, d_delta])

    def lagrangian(
        self, x: RealVector, multipliers: RealVector, penalty: float
    ) -> tuple[float, RealVector]:
        value, gradient = self.cost(x)
        margins, weights, unitary = self.margins(x)
        active = np.maximum(0.0, multipliers + penalty * margins)
        value += float(np.sum(active**2 - multipliers**2) / (2 * penalty))
        if np.any(active > 0):
            combined = np.tensordot(active, weights, axes=1)
            gamma = self.spec.amplitude_map.pullback(unitary, combined.ravel())
            gradient = gradient + _circuit_gradient(self.layout, x, gamma)
        return value, gradient


def _constraint_names(spec: ProblemSpec, constraints: Sequence[HeraldConstraint]) -> list[str]:
    probability = [f"P[{spec.ancilla_patterns[c.pattern].label}]" for c in constraints]
    fidelity = [
        f"M[{spec.targets[c.target].label or c.target}|{spec.ancilla_patterns[c.pattern].label}]"
        for c in constraints
    ]
    return probability + fidelity


def _residuals(
    circuit: CircuitSpec, spec: ProblemSpec, constraints: Sequence[HeraldConstraint], tol: float
) -> dict[str, float]:
    report = herald_analysis(compose(circuit), spec)
    shortfalls = [max(0.0, c.floor - tol - report.probabilities[c.pattern]) for c in constraints]
    shortfalls += [max(0.0, 1 - tol - report.overlaps[c.target, c.pattern]) for c in constraints]
    return dict(zip(_constraint_names(spec, constraints), (float(s) for s in shortfalls)))


def _violated(margins: RealVector, tol: float) -> int:
    # margins carry half the tolerance already
    return int(np.count_nonzero(margins > tol / 2))


def _to_circuit(layout: _Layout, x: RealVector) -> CircuitSpec:
    thetas, phis, deltas = layout.split(x)
    blocks = [(float(t), float(p), modes) for t, p, modes in zip(thetas, phis, layout.modes)]
    return canonicalize(layout.dim, blocks, np.exp(1j * deltas))


def _snap_angle(value: float, anchors: Sequence[float], tolerance: float) -> float:
    for anchor in anchors:
        if abs(value - anchor) <= tolerance:
            return anchor
    return value


def _snapped(circuit: CircuitSpec, tolerance: float) -> CircuitSpec:
    elements = tuple(
        TwoModeElement(
            _snap_angle(e.theta, (0.0, pi / 2), tolerance),
            _snap_angle(e.phi, (0.0, pi, -pi), tolerance),
            e.modes,
        )
        for e in circuit.elements
    )
    angles = [
        _snap_angle(float(a), (0.0, pi, -pi), tolerance) for a in circuit.output_phases.angles
    ]
    return CircuitSpec(circuit.dim, elements, PhaseLayer.from_angles(angles))


def _constraints_for(candidate: Candidate, config: Stage2Config) -> tuple[HeraldConstraint, ...]:
    constraints = []
    for a in candidate.ancilla_set:
        pattern = candidate.spec.ancilla_patterns[a].occupations
        floor = config.probability_floor.get(pattern, candidate.probabilities[a])
        constraints.append(HeraldConstraint(a, candidate.matched_targets[a], floor))
    return tuple(constraints)


def _result(
    circuit: CircuitSpec,
    spec: ProblemSpec,
    constraints: Sequence[HeraldConstraint],
    config: Stage2Config,
    history: Sequence[OuterIteration],
) -> RefinementResult:
    residuals = _residuals(circuit, spec, constraints, config.constraint_tolerance)
    return RefinementResult(
        circuit=circuit,
        feasible=not any(residuals.values()),
        residuals=residuals,
        nontrivial=count_nontrivial(circuit),
        cost=simplicity_cost(circuit, config.cost_params),
        history=tuple(history),
    )


def stage2_refine(
    candidate: Candidate,
    config: Stage2Config | None = None,
    *,
    initial_circuit: CircuitSpec | None = None,
) -> RefinementResult:
    """
    Simplify the circuit of a candidate while keeping every admissible pattern
    at its probability floor and perfect fidelity.

    The simplicity cost is minimized under the probability and fidelity
    bounds with an augmented Lagrangian around the BFGS solver. An outer
    iteration whose result violates more bounds than its starting point is
    rejected. The end point is canonicalized, near-trivial angles are snapped
    when that keeps the circuit feasible, and the starting circuit is returned
    instead whenever the refined one is infeasible or has more non-trivial
    elements.

    Args:
        candidate: The unitary and admissible patterns to keep.
        config: Cost weights, floors and the penalty schedule.
        initial_circuit: Starting circuit. Defaults to the Clements
            decomposition of the candidate's unitary.
    """
    config = config or Stage2Config()
    spec = candidate.spec
    start = initial_circuit or clements_decompose(candidate.unitary)
    if start.dim != spec.n_modes:
        raise DimensionError(
            f"The initial circuit acts on {start.dim} modes but the problem has {spec.n_modes}."
        )

    for pattern in config.probability_floor:
        if FockState(pattern) not in spec.ancilla_patterns:
            raise ConfigError(
                f"`probability_floor` names {pattern}, which is not an ancilla pattern."
            )

    constraints = _constraints_for(candidate, config)
    tol = config.constraint_tolerance
    initial = _result(start, spec, constraints, config, ())
    if initial.feasible and initial.cost <= _ZERO_COST:
        _log.info("Initial circuit is feasible and already costs nothing")
        return initial

    layout = _Layout(start.dim, tuple(e.modes for e in start.elements))
    problem = _Problem(spec, layout, constraints, config.cost_params, tol)
    options = BFGSOptions(max_iterations=config.max_inner_iterations)

    x = circuit_parameters(start)
    margins, _, _ = problem.margins(x)
    violated = _violated(margins, tol)
    multipliers = np.zeros(len(margins))
    history: list[OuterIteration] = []

    for k in range(config.max_outer_iterations):
        penalty = config.penalty(k)
        result = bfgs_minimize(
            partial(problem.lagrangian, multipliers=multipliers, penalty=penalty), x, options
        )
        new_margins, _, _ = problem.margins(result.x)
        new_violated = _violated(new_margins, tol)
        accepted = new_violated <= violated
        if accepted:
            x, margins, violated = result.x, new_margins, new_violated
            multipliers = np.maximum(0.0, multipliers + penalty * margins)

        cost = problem.cost(x)[0]
        history.append(OuterIteration(penalty, violated, cost, accepted))
        _log.debug(
            "Outer iteration %d: penalty %g, %d violated, cost %.10g%s",
            k,
            penalty,
            violated,
            cost,
            "" if accepted else " (rejected)",
        )

    refined = _result(_to_circuit(layout, x), spec, constraints, config, history)
    if config.snap_tolerance > 0:
        snapped = _result(
            _snapped(refined.circuit, config.snap_tolerance), spec, constraints, config, history
        )
        if snapped.feasible:
            refined = snapped

    if initial.feasible and (not refined.feasible or refined.nontrivial > initial.nontrivial):
        _log.info("Refinement did not improve on the initial circuit, keeping it")
        return RefinementResult(
            initial.circuit,
            True,
            initial.residuals,
            initial.nontrivial,
            initial.cost,
            tuple(history),
        )

    if not refined.feasible:
        _log.warning(
            "Refinement ended infeasible: %s",
            ", ".join(f"{k} short by {v:.3g}" for k, v in refined.residuals.items() if v),
        )
    else:
        _log.info(
            "Refined to %d non-trivial elements with cost %.10g", refined.nontrivial, refined.cost
        )
    return refined
