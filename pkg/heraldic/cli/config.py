from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from heraldic.circuit import CostParams
from heraldic.exceptions import ConfigError, HeraldicException
from heraldic.fock import FockState, ProblemSpec, TargetState, herald_patterns
from heraldic.optimizer import Stage1Config, Stage2Config
from heraldic.schemes import bell_state, bell_targets, ghz_canonical_targets, ghz_targets

__all__: Sequence[str] = (
    "TARGET_FAMILIES",
    "SearchConfig",
    "load_problem",
    "load_stage2",
    "load_search_config",
)

TARGET_FAMILIES: Mapping[str, Callable[[], list[TargetState]]] = {
    "ghz": ghz_targets,
    "ghz-canonical": ghz_canonical_targets,
    "bell": lambda: [b.state for b in bell_targets()],
    "bell-psi": lambda: [bell_state("psi+"), bell_state("psi-")],
}

_STAGE1_KEYS = {
    "p",
    "restarts",
    "master_seed",
    "gradient_tolerance",
    "max_iterations",
    "filter_tolerance",
    "max_reanchors",
    "workers",
}
_STAGE2_KEYS = {
    "epsilon",
    "delta",
    "probability_floor",
    "constraint_tolerance",
    "penalty_schedule",
    "max_outer_iterations",
    "max_inner_iterations",
    "snap_tolerance",
}


@dataclass(frozen=True)
class SearchConfig:
    stage1: Stage1Config
    stage2: Stage2Config

    def resolved(self) -> dict[str, Any]:
        """The configuration that identifies a run. Worker counts do not change results."""
        stage1 = self.stage1.to_json()
        problem = stage1.pop("problem")
        stage1.pop("workers")
        return {"problem": problem, "stage1": stage1, "stage2": self.stage2.to_json()}


def _section(data: Mapping[str, Any], name: str, allowed: set[str]) -> dict[str, Any]:
    section = data.get(name, {})
    if not isinstance(section, dict):
        raise ConfigError(f"`{name}` must be an object.")
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"`{name}` has unknown keys: {', '.join(sorted(unknown))}.")
    return section


def _patterns(value: Any, n_modes: int) -> tuple[FockState, ...]:
    if isinstance(value, dict):
        try:
            photons = int(value["photons"])
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("`ancilla_patterns` needs an integer `photons`.") from e
        cap = value.get("max_occupation")
        if cap is not None:
            cap = int(cap)
        return tuple(herald_patterns(n_modes, photons, cap))
    if not isinstance(value, list):
        raise ConfigError("`ancilla_patterns` must be a list or a `photons` object.")
    return tuple(FockState.from_json(p, field="ancilla_patterns") for p in value)


def _targets(value: Any) -> tuple[TargetState, ...]:
    if isinstance(value, str):
        family = TARGET_FAMILIES.get(value)
        if family is None:
            raise ConfigError(
                f"Unknown target family `{value}`, expected one of {', '.join(TARGET_FAMILIES)}."
            )
        return tuple(family())
    if not isinstance(value, list):
        raise ConfigError("`targets` must be a family name or a list of target states.")
    return tuple(TargetState.from_json(t) for t in value)


def load_problem(data: Any) -> ProblemSpec:
    """
    Build a problem from its JSON block. Targets may name a built-in family
    and patterns may ask for every occupation of a photon number.
    """
    if not isinstance(data, dict):
        raise ConfigError("`problem` must be an object.")
    try:
        n_target_modes = int(data["n_target_modes"])
        n_ancilla_modes = int(data["n_ancilla_modes"])
        input_state = FockState.from_json(data["input"], field="input")
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(
            "`problem` needs `n_target_modes`, `n_ancilla_modes` and an `input` state."
        ) from e

    return ProblemSpec(
        n_target_modes=n_target_modes,
        n_ancilla_modes=n_ancilla_modes,
        input=input_state,
        ancilla_patterns=_patterns(data.get("ancilla_patterns", []), n_ancilla_modes),
        targets=_targets(data.get("targets", [])),
    )


def load_stage2(data: Mapping[str, Any]) -> Stage2Config:
    section = _section(data, "stage2", _STAGE2_KEYS)
    floors = section.get("probability_floor", [])
    try:
        floor_map = {tuple(int(n) for n in f["pattern"]): float(f["floor"]) for f in floors}
        return Stage2Config(
            cost_params=CostParams(
                float(section.get("epsilon", 0.01)), float(section.get("delta", 0.01))
            ),
            probability_floor=floor_map,
            constraint_tolerance=float(section.get("constraint_tolerance", 1e-8)),
            penalty_schedule=tuple(
                float(m) for m in section.get("penalty_schedule", (10, 100, 1e3, 1e4, 1e5))
            ),
            max_outer_iterations=int(section.get("max_outer_iterations", 5)),
            max_inner_iterations=int(section.get("max_inner_iterations", 2000)),
            snap_tolerance=float(section.get("snap_tolerance", 1e-4)),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"`stage2` is malformed: {e}") from e


def load_search_config(
    data: Any, *, seed: int | None = None, workers: int | None = None
) -> SearchConfig:
    """
    Parse a `{"problem": ..., "stage1": ..., "stage2": ...}` document.
    `seed` and `workers` override the file's values.

    Raises:
        ConfigError: The document is malformed or its targets can never be heralded.
    """
    if not isinstance(data, dict):
        raise ConfigError("A search config must be a JSON object.")
    try:
        problem = load_problem(data.get("problem"))
    except HeraldicException as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"`problem` is invalid: {e}") from e

    if not problem.sector_consistent:
        raise ConfigError(
            f"Every target must carry {problem.target_photons} photons, the input photons"
            " left after heralding."
        )

    section = _section(data, "stage1", _STAGE1_KEYS)
    try:
        stage1 = Stage1Config(
            spec=problem,
            p=int(section.get("p", 4)),
            restarts=int(section.get("restarts", 1)),
            master_seed=int(seed if seed is not None else section.get("master_seed", 0)),
            gradient_tolerance=float(section.get("gradient_tolerance", 1e-9)),
            max_iterations=int(section.get("max_iterations", 2000)),
            filter_tolerance=float(section.get("filter_tolerance", 1e-6)),
            max_reanchors=int(section.get("max_reanchors", 20)),
            workers=int(workers if workers is not None else section.get("workers", 1)),
        )
    except (TypeError, ValueError) as e:
        raise ConfigError(f"`stage1` is malformed: {e}") from e

    return SearchConfig(stage1, load_stage2(data))
