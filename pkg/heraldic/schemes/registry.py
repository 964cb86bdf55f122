from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Callable, Optional, Sequence

from heraldic.exceptions import UnknownSchemeError
from heraldic.fock import ZERO_PROBABILITY, FockState
from heraldic.schemes.bell import bell_basis_decomposition, bell_problem, bell_scheme
from heraldic.schemes.claims import Claim, ClaimSet, ClaimType
from heraldic.schemes.ghz import GHZ_PATTERNS, ghz_problem, ghz_scheme, ghz_scheme_block_form
from heraldic.schemes.omega import omega_block, omega_prime_block
from heraldic.schemes.targets import bell_targets

if TYPE_CHECKING:
    from heraldic.circuit import CircuitSpec
    from heraldic.fock import HeraldReport

__all__: Sequence[str] = ("SchemeEntry", "get_scheme", "scheme_names")

DetailsT = Callable[["HeraldReport"], "dict[str, Any]"]


@dataclass(frozen=True)
class SchemeEntry:
    """A built-in circuit with the claims it is known to satisfy."""

    name: str
    description: str
    build: Callable[[], CircuitSpec]
    claims: Callable[[], ClaimSet]
    details: Optional[DetailsT] = None


_SCHEMES: dict[str, SchemeEntry] = {}


def _register(
    name: str, description: str, claims: Callable[[], ClaimSet], details: DetailsT | None = None
) -> Callable[[Callable[[], CircuitSpec]], Callable[[], CircuitSpec]]:
    def decorator(build: Callable[[], CircuitSpec]) -> Callable[[], CircuitSpec]:
        _SCHEMES[name] = SchemeEntry(name, description, build, claims, details)
        return build

    return decorator


def get_scheme(name: str) -> SchemeEntry:
    try:
        return _SCHEMES[name]
    except KeyError:
        raise UnknownSchemeError(
            f"No scheme named `{name}`. Known schemes: {', '.join(scheme_names())}."
        ) from None


def scheme_names() -> list[str]:
    return sorted(_SCHEMES)


def _probability(pattern: FockState, expected: Fraction) -> Claim:
    return Claim(ClaimType.PATTERN_PROBABILITY, float(expected), pattern=pattern)


def _fidelity(pattern: FockState, target: str, expected: float = 1.0) -> Claim:
    return Claim(ClaimType.HERALDED_FIDELITY, expected, pattern=pattern, target=target)


def _ghz_claims(count: int | None) -> Callable[[], ClaimSet]:
    def build() -> ClaimSet:
        plus, minus = GHZ_PATTERNS
        claims = [
            _probability(plus, Fraction(1, 108)),
            _probability(minus, Fraction(1, 108)),
            Claim(ClaimType.SUCCESS_PROBABILITY, float(Fraction(1, 54)), patterns=GHZ_PATTERNS),
            _fidelity(plus, "+101010"),
            _fidelity(minus, "-101010"),
        ]
        if count is not None:
            claims.append(Claim(ClaimType.ELEMENT_COUNT, count, tolerance=0))
        return ClaimSet(ghz_problem(), tuple(claims))

    return build


_COINCIDENCE = FockState((1, 1))


def _bell_claims(*fidelities: tuple[str, float]) -> Callable[[], ClaimSet]:
    def build() -> ClaimSet:
        claims = [_probability(_COINCIDENCE, Fraction(2, 27))]
        claims += [_fidelity(_COINCIDENCE, label, value) for label, value in fidelities]
        return ClaimSet(bell_problem([b.state for b in bell_targets()]), tuple(claims))

    return build


def _bunched_decompositions(report: HeraldReport) -> dict[str, Any]:
    """Bell basis content of the states heralded by both herald photons in one mode."""
    out: dict[str, Any] = {}
    for pattern in (FockState((2, 0)), FockState((0, 2))):
        probability = report.probability(pattern)
        entry: dict[str, Any] = {"probability": probability}
        if probability >= ZERO_PROBABILITY:
            state = report.heralded_state(pattern)
            entry["plain"] = bell_basis_decomposition(state)
            entry["rotated"] = bell_basis_decomposition(state, rotated=True)
        out[pattern.label] = entry
    return out


@_register("ghz54", "12 element GHZ source, success probability 1/54", _ghz_claims(12))
def _ghz54() -> CircuitSpec:
    return ghz_scheme()


@_register("ghz54-blocks", "The GHZ source assembled from its arm blocks", _ghz_claims(None))
def _ghz54_blocks() -> CircuitSpec:
    return ghz_scheme_block_form()


@_register(
    "bell-omega",
    "Bell source from two omega blocks, heralds psi+ with probability 2/27",
    _bell_claims(("psi+", 1.0)),
    _bunched_decompositions,
)
def _bell_omega() -> CircuitSpec:
    return bell_scheme(1, omega_block())


@_register(
    "bell-omega-minus",
    "Bell source from two omega blocks with the sign flip, heralds psi-",
    _bell_claims(("psi-", 1.0)),
    _bunched_decompositions,
)
def _bell_omega_minus() -> CircuitSpec:
    return bell_scheme(-1, omega_block())


@_register(
    "bell-omega-prime",
    "Bell source from two truncated omega blocks, heralds a psi+/phi- mixture",
    _bell_claims(("psi+", 0.25), ("phi-", 0.75)),
    _bunched_decompositions,
)
def _bell_omega_prime() -> CircuitSpec:
    return bell_scheme(1, omega_prime_block())


@_register(
    "bell-omega-prime-minus",
    "Bell source from two truncated omega blocks with the sign flip, heralds psi-",
    _bell_claims(("psi-", 1.0)),
    _bunched_decompositions,
)
def _bell_omega_prime_minus() -> CircuitSpec:
    return bell_scheme(-1, omega_prime_block())
