from typing import Sequence

from heraldic.optimizer.bfgs import *
from heraldic.optimizer.haar import *
from heraldic.optimizer.objective import *
from heraldic.optimizer.refine import *
from heraldic.optimizer.search import *

__all__: Sequence[str] = (
    "SeedLike",
    "haar_random_unitary",
    "BFGSOptions",
    "BFGSStatus",
    "BFGSResult",
    "bfgs_minimize",
    "HeraldConstraint",
    "ConstraintValues",
    "relaxed_objective",
    "evaluate_constraints",
    "stage1_objective",
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
    "Stage2Config",
    "OuterIteration",
    "RefinementResult",
    "circuit_parameters",
    "circuit_gradient",
    "stage2_refine",
)
