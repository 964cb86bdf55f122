from importlib.metadata import version
from typing import Sequence

from heraldic.circuit import *
from heraldic.exceptions import *
from heraldic.fock import *
from heraldic.optimizer import *
from heraldic.schemes import *

__version__: str = version("heraldic")

__all__: Sequence[str] = (
    # fock
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
    # circuit
    "TRIVIAL_TOLERANCE",
    "TwoModeElement",
    "PhaseLayer",
    "CircuitSpec",
    "element_matrix",
    "phase_element",
    "compose",
    "count_nontrivial",
    "rho_distance",
    "canonicalize",
    "clements_decompose",
    "CayleyChart",
    "chart_point",
    "hermitian_from_vector",
    "hermitian_to_vector",
    "cayley_pullback",
    "CostParams",
    "simplicity_cost",
    "cost_terms",
    # optimizer
    "haar_random_unitary",
    "BFGSOptions",
    "BFGSStatus",
    "BFGSResult",
    "bfgs_minimize",
    "HeraldConstraint",
    "relaxed_objective",
    "evaluate_constraints",
    "stage1_objective",
    "Stage1Config",
    "Candidate",
    "SearchStatistics",
    "SearchReport",
    "filter_candidate",
    "stage1_local_search",
    "run_stage1",
    "run_stage1_async",
    "stage1_search",
    "stage1_search_async",
    "Stage2Config",
    "RefinementResult",
    "circuit_gradient",
    "stage2_refine",
    # schemes
    "omega_block",
    "omega_prime_block",
    "OmegaCoefficients",
    "omega_coefficients",
    "ghz_targets",
    "ghz_canonical_targets",
    "bell_targets",
    "bell_state",
    "ghz_problem",
    "ghz_scheme",
    "ghz_scheme_block_form",
    "bell_problem",
    "bell_scheme",
    "bell_herald_form",
    "bell_basis_decomposition",
    "Claim",
    "ClaimType",
    "ClaimSet",
    "parse_claims",
    "verify_scheme",
    "get_scheme",
    "scheme_names",
    # exceptions
    "HeraldicException",
    "DimensionError",
    "NotUnitaryError",
    "NotHermitianError",
    "SectorMismatchError",
    "InvalidStateError",
    "InvalidCircuitError",
    "ClaimError",
    "ConfigError",
    "OptimizationError",
    "UnknownSchemeError",
)
