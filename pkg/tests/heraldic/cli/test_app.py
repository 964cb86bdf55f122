import json
from math import pi

import numpy as np
import pytest
from typer.testing import CliRunner

from heraldic import (
    Candidate,
    FockState,
    ProblemSpec,
    TargetState,
    TwoModeElement,
    element_matrix,
    filter_candidate,
)
from heraldic.cli import EXIT_CLAIM_FAILED, EXIT_INFEASIBLE, EXIT_NUMERIC, EXIT_USAGE, app
from heraldic.internal import matrix_to_json
from tests.utils import toy_problem

runner = CliRunner()


def _write(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def _read(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_verify_ghz(tmp_path):
    out = tmp_path / "ghz.json"
    result = runner.invoke(app, ["verify", "ghz54", "--out", str(out)])
    assert result.exit_code == 0
    document = _read(out)
    assert document["report"]["passed"] is True
    assert document["manifest"]["command"] == "verify"
    displays = [p["probability_display"]["rational"] for p in document["herald"]["patterns"]]
    assert displays.count("1/108") >= 2


def test_verify_bell_reports_bunched_patterns(tmp_path):
    out = tmp_path / "bell.json"
    result = runner.invoke(app, ["verify", "bell-omega", "--out", str(out)])
    assert result.exit_code == 0
    details = _read(out)["report"]["details"]
    assert set(details) == {"20", "02"}


def test_verify_unknown_scheme():
    result = runner.invoke(app, ["verify", "nosuch"])
    assert result.exit_code == EXIT_USAGE


def test_verify_failing_claim(tmp_path):
    claims = _write(
        tmp_path / "claims.json",
        [{"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": "1/2"}],
    )
    out = tmp_path / "out.json"
    result = runner.invoke(app, ["verify", "ghz54", "--claims", claims, "--out", str(out)])
    assert result.exit_code == EXIT_CLAIM_FAILED
    assert _read(out)["report"]["passed"] is False


def test_exported_circuit_simulates_the_same(tmp_path):
    circuit = tmp_path / "ghz-circuit.json"
    result = runner.invoke(
        app, ["verify", "ghz54", "--export", str(circuit), "--out", str(tmp_path / "v.json")]
    )
    assert result.exit_code == 0

    patterns = _write(tmp_path / "patterns.json", [[1, 1, 1, 0], [1, 1, 0, 1]])
    out = tmp_path / "sim.json"
    result = runner.invoke(
        app,
        [
            "simulate",
            str(circuit),
            "--input",
            "1,1,1,1,1,1,0,0,0,0",
            "--patterns",
            patterns,
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0
    entries = _read(out)["report"]["patterns"]
    assert [e["probability"] for e in entries] == pytest.approx([1 / 108, 1 / 108], abs=1e-12)


def test_simulate_without_ancillas(tmp_path):
    splitter = element_matrix(TwoModeElement(pi / 4, 0, (0, 1)), 2)
    matrix = _write(tmp_path / "bs.json", matrix_to_json(splitter))
    out = tmp_path / "sim.json"
    result = runner.invoke(app, ["simulate", matrix, "--input", "1,1", "--out", str(out)])
    assert result.exit_code == 0
    report = _read(out)["report"]
    (entry,) = report["patterns"]
    assert entry["pattern"] == []
    assert entry["probability"] == pytest.approx(1)
    coincidence = report["basis"].index([1, 1])
    assert np.hypot(*entry["heralded_state"][coincidence]) == pytest.approx(0, abs=1e-12)


def test_simulate_bad_input(tmp_path):
    matrix = _write(tmp_path / "id.json", matrix_to_json(np.eye(2)))
    result = runner.invoke(app, ["simulate", matrix, "--input", "1,x"])
    assert result.exit_code == EXIT_USAGE


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    result = runner.invoke(app, ["decompose", str(path)])
    assert result.exit_code == EXIT_USAGE


def test_missing_file(tmp_path):
    result = runner.invoke(app, ["decompose", str(tmp_path / "missing.json")])
    assert result.exit_code == EXIT_USAGE


def test_decompose_rejects_non_unitary(tmp_path):
    matrix = _write(tmp_path / "m.json", matrix_to_json(2 * np.eye(3)))
    result = runner.invoke(app, ["decompose", matrix])
    assert result.exit_code == EXIT_NUMERIC


def test_decompose_identity(tmp_path):
    matrix = _write(tmp_path / "m.json", matrix_to_json(np.eye(4)))
    out = tmp_path / "out.json"
    result = runner.invoke(app, ["decompose", matrix, "--out", str(out)])
    assert result.exit_code == 0
    document = _read(out)
    assert document["nontrivial"] == 0
    assert document["residual"] < 1e-12
    assert len(document["circuit"]["elements"]) == 6


def test_search_rejects_zero_restarts(tmp_path):
    config = _write(
        tmp_path / "c.json", {"problem": toy_problem().to_json(), "stage1": {"restarts": 0}}
    )
    result = runner.invoke(app, ["search", config, "--workers", "1"])
    assert result.exit_code == EXIT_USAGE


def test_search_writes_a_manifest(tmp_path):
    config = _write(
        tmp_path / "c.json",
        {"problem": toy_problem().to_json(), "stage1": {"restarts": 2, "max_iterations": 100}},
    )
    out = tmp_path / "out.json"
    args = ["search", config, "--seed", "5", "--workers", "1", "--out", str(out)]
    result = runner.invoke(app, args)
    assert result.exit_code == 0
    document = _read(out)
    assert document["manifest"]["master_seed"] == 5
    assert document["config"]["stage1"]["master_seed"] == 5
    assert "workers" not in document["config"]["stage1"]
    assert document["statistics"]["restarts"] == 2
    assert document["problem"] == toy_problem().to_json()


def test_search_output_does_not_depend_on_workers(tmp_path):
    config = _write(
        tmp_path / "c.json",
        {"problem": toy_problem().to_json(), "stage1": {"restarts": 3, "max_iterations": 200}},
    )
    documents = []
    for workers in ("1", "2"):
        out = tmp_path / f"out-{workers}.json"
        result = runner.invoke(app, ["search", config, "--workers", workers, "--out", str(out)])
        assert result.exit_code == 0
        document = _read(out)
        del document["manifest"]["timings"]
        documents.append(document)
    assert documents[0] == documents[1]


def _bunching_dump():
    spec = ProblemSpec(
        1,
        1,
        FockState((2, 0)),
        (FockState((1,)),),
        (TargetState(((FockState((1,)), 1.0),), "one"),),
    )
    unitary = element_matrix(TwoModeElement(pi / 4, 0, (0, 1)), 2)
    ancilla_set, matched, probabilities = filter_candidate(unitary, spec, 1e-6)
    candidate = Candidate(spec, unitary, ancilla_set, matched, probabilities, 0.0)
    return {"problem": spec.to_json(), "candidates": [candidate.to_json()]}


def test_refine_reports_an_unreachable_floor(tmp_path):
    candidates = _write(tmp_path / "cands.json", _bunching_dump())
    config = _write(
        tmp_path / "c.json",
        {
            "stage2": {
                "probability_floor": [{"pattern": [1], "floor": 1.0}],
                "max_outer_iterations": 1,
                "max_inner_iterations": 20,
            }
        },
    )
    out = tmp_path / "out.json"
    result = runner.invoke(app, ["refine", candidates, "--config", config, "--out", str(out)])
    assert result.exit_code == EXIT_INFEASIBLE
    assert _read(out)["feasible"] is False


def test_refine_keeps_a_needed_splitter(tmp_path):
    candidates = _write(tmp_path / "cands.json", _bunching_dump())
    out = tmp_path / "out.json"
    result = runner.invoke(app, ["refine", candidates, "--out", str(out)])
    assert result.exit_code == 0
    document = _read(out)
    assert document["feasible"] is True
    assert document["nontrivial"] == 1


def test_refine_index_out_of_range(tmp_path):
    candidates = _write(tmp_path / "cands.json", _bunching_dump())
    result = runner.invoke(app, ["refine", candidates, "--index", "3"])
    assert result.exit_code == EXIT_USAGE


@pytest.mark.parametrize(
    "broken",
    [
        lambda c: c.pop("unitary"),
        lambda c: c.pop("ancilla_set"),
        lambda c: c.update(ancilla_set=[{"pattern": [1]}]),
        lambda c: c.update(ancilla_set=3),
    ],
)
def test_refine_rejects_a_malformed_candidate(tmp_path, broken):
    dump = _bunching_dump()
    broken(dump["candidates"][0])
    result = runner.invoke(app, ["refine", _write(tmp_path / "cands.json", dump)])
    assert result.exit_code == EXIT_USAGE


def test_refine_rejects_a_candidate_list_that_is_not_an_array(tmp_path):
    dump = {**_bunching_dump(), "candidates": {"0": {}}}
    result = runner.invoke(app, ["refine", _write(tmp_path / "cands.json", dump)])
    assert result.exit_code == EXIT_USAGE


def test_list_schemes():
    result = runner.invoke(app, ["schemes"])
    assert result.exit_code == 0
    assert "ghz54" in result.output
    assert "bell-omega" in result.output
