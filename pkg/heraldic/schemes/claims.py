from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from logging import getLogger
from typing import TYPE_CHECKING, Any, Mapping, Sequence, Union

from heraldic.circuit import compose, count_nontrivial
from heraldic.exceptions import ClaimError, DimensionError, InvalidStateError
from heraldic.fock import ZERO_PROBABILITY, FockState, HeraldReport, herald_analysis

if TYPE_CHECKING:
    from heraldic.circuit import CircuitSpec
    from heraldic.fock import ProblemSpec

__all__: Sequence[str] = (
    "ClaimType",
    "Claim",
    "ClaimSet",
    "ClaimResult",
    "VerificationReport",
    "parse_claims",
    "verify_scheme",
)

_log = getLogger(__name__)

_DEFAULT_TOLERANCE = 1e-9

TargetRefT = Union[int, str]


class ClaimType(str, Enum):
    PATTERN_PROBABILITY = "pattern_probability"
    SUCCESS_PROBABILITY = "success_probability"
    HERALDED_FIDELITY = "heralded_fidelity"
    ELEMENT_COUNT = "element_count"


def _parse_expected(value: Any, where: str) -> float:
    if isinstance(value, bool):
        raise ClaimError(f"{where}: `expected` must be a number or a fraction, got {value!r}.")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ClaimError(f"{where}: `expected` = {value!r} is not a number.") from e
    raise ClaimError(f"{where}: `expected` must be a number or a fraction, got {value!r}.")


def _parse_pattern(value: Any, where: str) -> FockState:
    try:
        return FockState.from_json(value, field="pattern")
    except InvalidStateError as e:
        raise ClaimError(f"{where}: {e}") from e


@dataclass(frozen=True)
class Claim:
    """
    A single expected number about a scheme.

    `pattern` is used by probability and fidelity claims, `patterns` by
    success probability claims and `target` (an index or a label) by
    fidelity claims.
    """

    type: ClaimType
    expected: float
    tolerance: float = _DEFAULT_TOLERANCE
    pattern: FockState | None = None
    patterns: tuple[FockState, ...] = ()
    target: TargetRefT | None = None

    def __post_init__(self) -> None:
        if self.tolerance < 0:
            raise ClaimError(f"`tolerance` must be non-negative, got {self.tolerance}.")
        needs_pattern = self.type in (ClaimType.PATTERN_PROBABILITY, ClaimType.HERALDED_FIDELITY)
        if needs_pattern and self.pattern is None:
            raise ClaimError(f"A `{self.type.value}` claim needs a `pattern`.")
        if self.type is ClaimType.SUCCESS_PROBABILITY and not self.patterns:
            raise ClaimError("A `success_probability` claim needs a non-empty `patterns` list.")
        if self.type is ClaimType.HERALDED_FIDELITY and self.target is None:
            raise ClaimError("A `heralded_fidelity` claim needs a `target`.")

    @classmethod
    def from_json(cls, data: Any, index: int = 0) -> Claim:
        where = f"claims[{index}]"
        if not isinstance(data, dict):
            raise ClaimError(f"{where} must be an object.")
        try:
            kind = ClaimType(data.get("type"))
        except ValueError:
            raise ClaimError(f"{where}: unknown claim type {data.get('type')!r}.") from None
        if "expected" not in data:
            raise ClaimError(f"{where}: missing `expected`.")

        tolerance = data.get("tolerance", 0 if kind is ClaimType.ELEMENT_COUNT else None)
        if tolerance is None:
            tolerance = _DEFAULT_TOLERANCE
        if isinstance(tolerance, bool) or not isinstance(tolerance, (int, float)):
            raise ClaimError(f"{where}: `tolerance` must be a number.")

        target = data.get("target")
        if target is not None and (isinstance(target, bool) or not isinstance(target, (int, str))):
            raise ClaimError(f"{where}: `target` must be an index or a label.")

        patterns = data.get("patterns", [])
        if not isinstance(patterns, list):
            raise ClaimError(f"{where}: `patterns` must be a list.")

        try:
            return cls(
                type=kind,
                expected=_parse_expected(data["expected"], where),
                tolerance=float(tolerance),
                pattern=_parse_pattern(data["pattern"], where) if "pattern" in data else None,
                patterns=tuple(_parse_pattern(p, where) for p in patterns),
                target=target,
            )
        except ClaimError as e:
            if str(e).startswith(where):
                raise
            raise ClaimError(f"{where}: {e}") from e

    def describe(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": self.type.value}
        if self.pattern is not None:
            out["pattern"] = self.pattern.to_json()
        if self.patterns:
            out["patterns"] = [p.to_json() for p in self.patterns]
        if self.target is not None:
            out["target"] = self.target
        return out


@dataclass(frozen=True)
class ClaimSet:
    """Claims together with the problem they are measured against."""

    problem: ProblemSpec
    claims: tuple[Claim, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "claims", tuple(self.claims))
        for i, claim in enumerate(self.claims):
            for pattern in (claim.pattern, *claim.patterns):
                if pattern is not None and pattern not in self.problem.ancilla_patterns:
                    raise ClaimError(
                        f"claims[{i}]: {pattern} is not an ancilla pattern of the problem."
                    )
            if claim.target is not None:
                try:
                    self.problem.target_index(claim.target)
                except InvalidStateError as e:
                    raise ClaimError(f"claims[{i}]: {e}") from e


def parse_claims(data: Any, problem: ProblemSpec) -> ClaimSet:
    """
    Parse a JSON array of claims. Every problem with the claims is reported
    here, before anything is simulated.

    ### Example
    ```python
    claim = {"type": "pattern_probability", "pattern": [1, 1, 1, 0], "expected": "1/108"}
    parse_claims([claim], ghz_problem())
    ```
    """
    if not isinstance(data, list):
        raise ClaimError("A claim file must hold a JSON array.")
    return ClaimSet(problem, tuple(Claim.from_json(c, i) for i, c in enumerate(data)))


@dataclass(frozen=True)
class ClaimResult:
    claim: Claim
    measured: float

    @property
    def passed(self) -> bool:
        return abs(self.measured - self.claim.expected) <= self.claim.tolerance

    def to_json(self) -> dict[str, Any]:
        return {
            **self.claim.describe(),
            "expected": self.claim.expected,
            "measured": self.measured,
            "tolerance": self.claim.tolerance,
            "passed": self.passed,
        }


@dataclass(frozen=True, eq=False)
class VerificationReport:
    results: tuple[ClaimResult, ...]
    herald: HeraldReport | None = None
    details: Mapping[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[ClaimResult]:
        return [r for r in self.results if not r.passed]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "passed": self.passed,
            "claims": [r.to_json() for r in self.results],
        }
        if self.details:
            out["details"] = dict(self.details)
        return out


def _measure(
    claim: Claim, circuit: CircuitSpec, problem: ProblemSpec, report: HeraldReport
) -> float:
    if claim.type is ClaimType.ELEMENT_COUNT:
        return float(count_nontrivial(circuit))
    if claim.type is ClaimType.SUCCESS_PROBABILITY:
        return report.success_probability(claim.patterns)

    pattern = claim.pattern
    assert pattern is not None
    if report.probability(pattern) < ZERO_PROBABILITY:
        _log.warning("Claim references %s, which never heralds", pattern)
    if claim.type is ClaimType.PATTERN_PROBABILITY:
        return report.probability(pattern)

    target = claim.target
    assert target is not None
    return report.overlap(problem.target_index(target), pattern)


def verify_scheme(circuit: CircuitSpec, claims: ClaimSet) -> VerificationReport:
    """
    Measure every claim against a circuit.

    ### Example
    ```python
    verify_scheme(ghz_scheme(), get_scheme("ghz54").claims()).passed  # True
    ```
    """
    problem = claims.problem
    if circuit.dim != problem.n_modes:
        raise DimensionError(
            f"The circuit acts on {circuit.dim} modes but the claims are about {problem.n_modes}."
        )
    if not claims.claims:
        return VerificationReport(())

    report = herald_analysis(compose(circuit), problem)
    results = tuple(
        ClaimResult(claim, _measure(claim, circuit, problem, report)) for claim in claims.claims
    )
    for result in results:
        if not result.passed:
            _log.info(
                "Claim %s failed: measured %.15g, expected %.15g",
                result.claim.type.value,
                result.measured,
                result.claim.expected,
            )
    return VerificationReport(results, report)
