import json
from pathlib import Path

import pytest

from heraldic import ConfigError
from heraldic.cli import load_problem, load_search_config, load_stage2
from tests.utils import toy_problem


def _ghz_config(**stage1):
    return {
        "problem": {
            "n_target_modes": 6,
            "n_ancilla_modes": 4,
            "input": [1, 1, 1, 1, 1, 1, 0, 0, 0, 0],
            "ancilla_patterns": {"photons": 3, "max_occupation": 1},
            "targets": "ghz",
        },
        "stage1": stage1,
    }


def test_families_and_pattern_shorthand():
    problem = load_problem(_ghz_config()["problem"])
    assert len(problem.ancilla_patterns) == 4
    assert len(problem.targets) == 20
    assert problem.sector_consistent


def test_defaults():
    config = load_search_config(_ghz_config())
    assert config.stage1.p == 4
    assert config.stage1.restarts == 1
    assert config.stage2.cost_params.epsilon == 0.01
    assert config.stage2.max_outer_iterations == 5


def test_overrides():
    config = load_search_config(_ghz_config(master_seed=3, workers=2), seed=9, workers=4)
    assert config.stage1.master_seed == 9
    assert config.stage1.workers == 4


def test_resolved_config_ignores_workers():
    one = load_search_config(_ghz_config(), workers=1).resolved()
    four = load_search_config(_ghz_config(), workers=4).resolved()
    assert one == four
    assert "workers" not in one["stage1"]


def test_explicit_targets_and_patterns():
    problem = load_problem(toy_problem().to_json())
    assert problem.to_json() == toy_problem().to_json()


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"stage1": {}},
        {"problem": {"n_target_modes": 2}},
        {"problem": toy_problem().to_json(), "stage1": {"restarts": "many"}},
        {"problem": toy_problem().to_json(), "stage1": {"speed": 3}},
        {"problem": toy_problem().to_json(), "stage1": []},
        {"problem": {**toy_problem().to_json(), "targets": "nosuch"}},
        {"problem": {**toy_problem().to_json(), "targets": "bell"}},
        {"problem": {**toy_problem().to_json(), "ancilla_patterns": {"max_occupation": 1}}},
        {"problem": {**toy_problem().to_json(), "n_ancilla_modes": 3}},
    ],
)
def test_malformed_configs(data):
    with pytest.raises(ConfigError):
        load_search_config(data)


def test_stage2_floors():
    stage2 = load_stage2(
        {"stage2": {"probability_floor": [{"pattern": [1, 0], "floor": "0.25"}], "delta": 0}}
    )
    assert stage2.probability_floor == {(1, 0): 0.25}
    assert stage2.cost_params.delta == 0


def test_stage2_malformed():
    with pytest.raises(ConfigError):
        load_stage2({"stage2": {"probability_floor": [{"floor": 0.5}]}})
    with pytest.raises(ConfigError):
        load_stage2({"stage2": {"penalty_schedule": [5, 1]}})


@pytest.mark.parametrize("name", ["bell_search.json", "ghz_search.json"])
def test_shipped_configs(name):
    path = Path(__file__).parents[3] / "configs" / name
    config = load_search_config(json.loads(path.read_text(encoding="utf-8")))
    assert config.stage1.spec.sector_consistent
    assert config.stage1.restarts >= 200
