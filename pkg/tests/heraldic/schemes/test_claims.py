import pytest

from heraldic import ClaimError, DimensionError
from heraldic.schemes import (
    Claim,
    ClaimSet,
    ClaimType,
    bell_problem,
    bell_scheme,
    ghz_problem,
    ghz_scheme,
    omega_block,
    parse_claims,
    verify_scheme,
)


def test_fraction_strings():
    claims = parse_claims(
        [{"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": "1/108"}],
        ghz_problem(),
    )
    (claim,) = claims.claims
    assert claim.expected == pytest.approx(1 / 108)
    assert claim.tolerance == 1e-9


def test_wrong_claim_fails():
    claims = parse_claims(
        [{"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": 0.5}],
        ghz_problem(),
    )
    report = verify_scheme(ghz_scheme(), claims)
    assert not report.passed
    (failure,) = report.failures
    assert failure.measured == pytest.approx(1 / 108)
    assert report.to_json()["claims"][0]["passed"] is False


def test_element_count_claims_are_exact():
    claims = parse_claims([{"type": "element_count", "expected": 11}], ghz_problem())
    assert claims.claims[0].tolerance == 0
    assert not verify_scheme(ghz_scheme(), claims).passed


def test_fidelity_by_label_and_index():
    data = [
        {"type": "heralded_fidelity", "pattern": [1, 1, 0, 1], "target": "-101010", "expected": 1},
        {"type": "heralded_fidelity", "pattern": [1, 1, 0, 1], "target": 0, "expected": 0},
    ]
    assert verify_scheme(ghz_scheme(), parse_claims(data, ghz_problem())).passed


def test_success_probability_claim():
    patterns = [[1, 1, 1, 0], [1, 1, 0, 1]]
    data = [{"type": "success_probability", "patterns": patterns, "expected": "1/54"}]
    assert verify_scheme(ghz_scheme(), parse_claims(data, ghz_problem())).passed


def test_empty_claim_set_passes_without_simulating():
    report = verify_scheme(ghz_scheme(), ClaimSet(ghz_problem()))
    assert report.passed
    assert report.herald is None


@pytest.mark.parametrize(
    "data",
    [
        {"type": "pattern_probability", "pattern": [1, 1, 1, 0]},
        {"type": "probability", "pattern": [1, 1, 1, 0], "expected": 1},
        {"type": "pattern_probability", "expected": 1},
        {"type": "pattern_probability", "pattern": [0, 0, 1, 1], "expected": 1},
        {"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": "a third"},
        {"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": True},
        {"type": "heralded_fidelity", "pattern": [1, 1, 1, 0], "target": "nope", "expected": 1},
        {"type": "heralded_fidelity", "pattern": [1, 1, 1, 0], "expected": 1},
        {"type": "success_probability", "patterns": [], "expected": 1},
        {"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": 1, "tolerance": -1},
    ],
)
def test_malformed_claims(data):
    with pytest.raises(ClaimError):
        parse_claims([data], ghz_problem())


def test_claim_file_must_be_a_list():
    with pytest.raises(ClaimError):
        parse_claims({"type": "element_count"}, ghz_problem())


def test_circuit_must_match_the_problem():
    claims = ClaimSet(ghz_problem(), (Claim(ClaimType.ELEMENT_COUNT, 12, tolerance=0),))
    with pytest.raises(DimensionError):
        verify_scheme(bell_scheme(1, omega_block()), claims)


def test_bell_claims():
    data = [{"type": "heralded_fidelity", "pattern": [1, 1], "target": "psi+", "expected": 1}]
    assert verify_scheme(bell_scheme(1, omega_block()), parse_claims(data, bell_problem())).passed
