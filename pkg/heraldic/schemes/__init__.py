from typing import Sequence

from heraldic.schemes.bell import *
from heraldic.schemes.claims import *
from heraldic.schemes.ghz import *
from heraldic.schemes.omega import *
from heraldic.schemes.registry import *
from heraldic.schemes.targets import *

__all__: Sequence[str] = (
    "omega_block",
    "omega_prime_block",
    "OmegaCoefficients",
    "omega_coefficients",
    "ghz_targets",
    "ghz_canonical_targets",
    "NamedBellState",
    "BELL_LABELS",
    "bell_targets",
    "bell_state",
    "GHZ_INPUT",
    "GHZ_PATTERNS",
    "ghz_problem",
    "ghz_scheme",
    "ghz_arm_blocks",
    "ghz_scheme_block_form",
    "BELL_INPUT",
    "BELL_PATTERNS",
    "bell_problem",
    "bell_scheme",
    "bell_herald_form",
    "bell_basis_decomposition",
    "ClaimType",
    "Claim",
    "ClaimSet",
    "ClaimResult",
    "VerificationReport",
    "parse_claims",
    "verify_scheme",
    "SchemeEntry",
    "get_scheme",
    "scheme_names",
)
