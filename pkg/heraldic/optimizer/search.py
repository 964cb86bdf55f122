from __future__ import annotations

import asyncio
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from logging import getLogger
from typing import TYPE_CHECKING, Any, Callable, Mapping, Optional, Sequence

import numpy as np

from heraldic.circuit.cayley import CayleyChart, chart_point
from heraldic.circuit.elements import rho_distance
from heraldic.exceptions import ConfigError
from heraldic.fock import ZERO_PROBABILITY, FockState, ProblemSpec, herald_analysis
from heraldic.internal import matrix_from_json, matrix_to_json
from heraldic.optimizer.bfgs import BFGSOptions, BFGSStatus, bfgs_minimize
from heraldic.optimizer.haar import haar_random_unitary
from heraldic.optimizer.objective import stage1_objective
from heraldic.utils import restart_seed

if TYPE_CHECKING:
    from heraldic.typedefs import ComplexMatrix, RealVector

__all__: Sequence[str] = (
    "Stage1Config",
    "Candidate",
    "RestartOutcome",
    "SearchStatistics",
    "SearchReport",
    "filter_candidate",
    "stage1_local_search",
    "run_stage1",
    "run_stage1_async",
    "stage1_search",
    "stage1_search_async",
)

_log = getLogger(__name__)

_RHO_BINS = 10
_RHO_RANGE = (0.0, 2.0)

InitialUnitaryT = Callable[[int], "ComplexMatrix"]
"""Maps a restart index to the chart base that restart starts from."""


@dataclass(frozen=True)
class Stage1Config:
    """
    Args:
        spec: The heralding problem to search.
        p: Exponent of the fidelities in the relaxed objective.
        restarts: Number of independent random starts.
        master_seed: Every restart seed derives from this.
        gradient_tolerance: Inner BFGS stopping tolerance.
        max_iterations: BFGS iteration budget per chart.
        filter_tolerance: How close fidelities must be to 0 or 1 for a run to be accepted.
        max_reanchors: How often the chart may be re-centred on the current point.
        workers: Worker processes. `1` runs every restart in-process.
        initial_unitaries: Replaces the Haar draw of every restart. Must be
            picklable when `workers > 1`.
    """

    spec: ProblemSpec
    p: int = 4
    restarts: int = 1
    master_seed: int = 0
    gradient_tolerance: float = 1e-9
    max_iterations: int = 2000
    filter_tolerance: float = 1e-6
    max_reanchors: int = 20
    workers: int = 1
    initial_unitaries: Optional[InitialUnitaryT] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.p < 1:
            raise ConfigError(f"`p` must be at least 1, got {self.p}.")
        if self.restarts < 1:
            raise ConfigError(f"`restarts` must be at least 1, got {self.restarts}.")
        if self.gradient_tolerance <= 0 or self.filter_tolerance <= 0:
            raise ConfigError("`gradient_tolerance` and `filter_tolerance` must be positive.")
        if self.max_iterations < 0 or self.max_reanchors < 0:
            raise ConfigError("`max_iterations` and `max_reanchors` must be non-negative.")
        if self.workers < 1:
            raise ConfigError(f"`workers` must be at least 1, got {self.workers}.")

    @property
    def bfgs_options(self) -> BFGSOptions:
        return BFGSOptions(
            gradient_tolerance=self.gradient_tolerance, max_iterations=self.max_iterations
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "problem": self.spec.to_json(),
            "p": self.p,
            "restarts": self.restarts,
            "master_seed": self.master_seed,
            "gradient_tolerance": self.gradient_tolerance,
            "max_iterations": self.max_iterations,
            "filter_tolerance": self.filter_tolerance,
            "max_reanchors": self.max_reanchors,
            "workers": self.workers,
        }


@dataclass(frozen=True, eq=False)
class Candidate:
    """
    An accepted stage-one optimum.

    `ancilla_set` lists the indices of the admissible patterns, each matched
    to exactly one target in `matched_targets` and heralding with the
    probability stored in `probabilities`.
    """

    spec: ProblemSpec
    unitary: ComplexMatrix
    ancilla_set: tuple[int, ...]
    matched_targets: Mapping[int, int]
    probabilities: Mapping[int, float]
    objective_value: float
    restart: int = 0
    seed: int = 0
    rho: float = 0.0

    @property
    def success_probability(self) -> float:
        return float(sum(self.probabilities[a] for a in self.ancilla_set))

    @property
    def patterns(self) -> tuple[FockState, ...]:
        return tuple(self.spec.ancilla_patterns[a] for a in self.ancilla_set)

    def to_json(self) -> dict[str, Any]:
        return {
            "restart": self.restart,
            "seed": self.seed,
            "objective": self.objective_value,
            "rho": self.rho,
            "success_probability": self.success_probability,
            "ancilla_set": [
                {
                    "pattern": self.spec.ancilla_patterns[a].to_json(),
                    "target": self.spec.targets[self.matched_targets[a]].label
                    or self.matched_targets[a],
                    "probability": self.probabilities[a],
                }
                for a in self.ancilla_set
            ],
            "unitary": matrix_to_json(self.unitary),
        }

    @classmethod
    def from_json(cls, data: Any, spec: ProblemSpec) -> Candidate:
        """
        Raises:
            ConfigError: A field is missing or has the wrong type.
        """
        ancilla_set: list[int] = []
        matched: dict[int, int] = {}
        probabilities: dict[int, float] = {}
        try:
            for entry in data["ancilla_set"]:
                a = spec.pattern_index(FockState.from_json(entry["pattern"], field="pattern"))
                ancilla_set.append(a)
                matched[a] = spec.target_index(entry["target"])
                probabilities[a] = float(entry["probability"])
            return cls(
                spec=spec,
                unitary=matrix_from_json(data["unitary"]),
                ancilla_set=tuple(ancilla_set),
                matched_targets=matched,
                probabilities=probabilities,
                objective_value=float(data.get("objective", 0.0)),
                restart=int(data.get("restart", 0)),
                seed=int(data.get("seed", 0)),
                rho=float(data.get("rho", 0.0)),
            )
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise ConfigError(f"A candidate needs `ancilla_set` and `unitary`: {e!r}") from e


@dataclass(frozen=True, eq=False)
class RestartOutcome:
    restart: int
    seed: int
    objective_value: float
    rho: float
    status: BFGSStatus
    iterations: int
    reanchors: int
    candidate: Candidate | None


@dataclass(frozen=True)
class SearchStatistics:
    """Acceptance rate and the distribution of `rho` over accepted restarts."""

    restarts: int
    accepted: int
    rho_mean: float | None
    rho_std: float | None
    rho_histogram: tuple[int, ...]
    rho_bin_edges: tuple[float, ...]

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.restarts if self.restarts else 0.0

    @classmethod
    def from_outcomes(cls, restarts: int, outcomes: Sequence[RestartOutcome]) -> SearchStatistics:
        rhos = np.array([o.rho for o in outcomes if o.candidate is not None], dtype=np.float64)
        counts, edges = np.histogram(rhos, bins=_RHO_BINS, range=_RHO_RANGE)
        return cls(
            restarts=restarts,
            accepted=len(rhos),
            rho_mean=float(np.mean(rhos)) if len(rhos) else None,
            rho_std=float(np.std(rhos)) if len(rhos) else None,
            rho_histogram=tuple(int(c) for c in counts),
            rho_bin_edges=tuple(float(e) for e in edges),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "restarts": self.restarts,
            "accepted": self.accepted,
            "acceptance_rate": self.acceptance_rate,
            "rho_mean": self.rho_mean,
            "rho_std": self.rho_std,
            "rho_histogram": {
                "counts": list(self.rho_histogram),
                "edges": list(self.rho_bin_edges),
            },
        }


@dataclass(frozen=True, eq=False)
class SearchReport:
    candidates: tuple[Candidate, ...]
    outcomes: tuple[RestartOutcome, ...]
    statistics: SearchStatistics

    def to_json(self) -> dict[str, Any]:
        return {
            "candidates": [c.to_json() for c in self.candidates],
            "statistics": self.statistics.to_json(),
        }


def filter_candidate(
    unitary: ComplexMatrix, spec: ProblemSpec, tolerance: float
) -> tuple[tuple[int, ...], dict[int, int], dict[int, float]] | None:
    """
    The admissible patterns of a unitary, or `None` for an improper stationary point.

    A pattern is admissible when it heralds, exactly one target reaches a
    fidelity of at least `1 - tolerance` and every other target stays below
    `tolerance`. Patterns that are not admissible are simply not used for heralding.
    """
    report = herald_analysis(unitary, spec)
    ancilla_set: list[int] = []
    matched: dict[int, int] = {}
    probabilities: dict[int, float] = {}

    for a in range(len(spec.ancilla_patterns)):
        if report.probabilities[a] < ZERO_PROBABILITY or not spec.targets:
            continue
        column = report.overlaps[:, a]
        best = int(np.argmax(column))
        others = np.delete(column, best)
        if column[best] >= 1 - tolerance and np.all(others <= tolerance):
            ancilla_set.append(a)
            matched[a] = best
            probabilities[a] = float(report.probabilities[a])

    if not ancilla_set:
        return None
    return tuple(ancilla_set), matched, probabilities


def _negated(
    coordinate: RealVector, base: ComplexMatrix, spec: ProblemSpec, p: int
) -> tuple[float, RealVector]:
    value, gradient = stage1_objective(coordinate, base, spec, p)
    return -value, -gradient


def stage1_local_search(config: Stage1Config, restart: int) -> RestartOutcome:
    """
    Run a single restart: draw the chart base, maximize the relaxed objective
    with chart re-centring, then filter the end point.
    """
    spec = config.spec
    seed = restart_seed(config.master_seed, restart)
    if config.initial_unitaries is not None:
        start = np.asarray(config.initial_unitaries(restart), dtype=np.complex128)
    else:
        start = haar_random_unitary(spec.n_modes, seed)

    options = config.bfgs_options
    origin = np.zeros(spec.n_modes**2)
    anchor = start
    best = -np.inf
    status = BFGSStatus.CONVERGED
    iterations = 0
    reanchors = 0

    for reanchors in range(config.max_reanchors + 1):
        result = bfgs_minimize(
            partial(_negated, base=anchor, spec=spec, p=config.p), origin, options
        )
        iterations += result.iterations
        status = result.status
        value = -result.fun
        if value <= best:
            break
        improved = value - best > 1e-15 * max(1.0, abs(value))
        best = value
        anchor = chart_point(CayleyChart.from_vector(anchor, result.x))
        if not improved or result.iterations == 0:
            break
        _log.debug("Restart %d re-anchored at objective %.12g", restart, value)

    rho = rho_distance(anchor, start)
    accepted = filter_candidate(anchor, spec, config.filter_tolerance)
    candidate = None
    if accepted is not None:
        ancilla_set, matched, probabilities = accepted
        candidate = Candidate(
            spec=spec,
            unitary=anchor,
            ancilla_set=ancilla_set,
            matched_targets=matched,
            probabilities=probabilities,
            objective_value=float(best),
            restart=restart,
            seed=seed,
            rho=rho,
        )

    _log.info(
        "Restart %d: objective %.10g, %s, %s",
        restart,
        best,
        status.value,
        "accepted" if candidate is not None else "rejected",
    )
    return RestartOutcome(
        restart=restart,
        seed=seed,
        objective_value=float(best),
        rho=rho,
        status=status,
        iterations=iterations,
        reanchors=reanchors,
        candidate=candidate,
    )


def _sort_key(candidate: Candidate) -> tuple[float, int]:
    return (-candidate.success_probability, candidate.restart)


async def run_stage1_async(config: Stage1Config) -> SearchReport:
    """Run every restart of `config`, spreading them over `config.workers` processes."""
    if not config.spec.targets:
        _log.warning("The problem has no targets, nothing to search for")
        outcomes: list[RestartOutcome] = []
    elif config.workers == 1:
        outcomes = [stage1_local_search(config, r) for r in range(config.restarts)]
    else:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(
                await asyncio.gather(
                    *(
                        loop.run_in_executor(pool, stage1_local_search, config, r)
                        for r in range(config.restarts)
                    )
                )
            )

    candidates = sorted(
        (o.candidate for o in outcomes if o.candidate is not None), key=_sort_key
    )
    statistics = SearchStatistics.from_outcomes(config.restarts, outcomes)
    if not candidates:
        _log.warning("No restart out of %d was accepted", config.restarts)
    else:
        _log.info(
            "Accepted %d of %d restarts, best success probability %.12g",
            len(candidates),
            config.restarts,
            candidates[0].success_probability,
        )
    return SearchReport(tuple(candidates), tuple(outcomes), statistics)


def run_stage1(config: Stage1Config) -> SearchReport:
    return asyncio.run(run_stage1_async(config))


async def stage1_search_async(config: Stage1Config) -> list[Candidate]:
    return list((await run_stage1_async(config)).candidates)


def stage1_search(config: Stage1Config) -> list[Candidate]:
    """
    Accepted candidates of every restart, best success probability first.

    ### Example
    ```python
    candidates = stage1_search(Stage1Config(bell_problem(), restarts=200, master_seed=3))
    candidates[0].success_probability  # 2 / 27
    ```
    """
    return list(run_stage1(config).candidates)
