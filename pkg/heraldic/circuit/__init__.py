from typing import Sequence

from heraldic.circuit.cayley import *
from heraldic.circuit.clements import *
from heraldic.circuit.cost import *
from heraldic.circuit.elements import *

__all__: Sequence[str] = (
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
)
