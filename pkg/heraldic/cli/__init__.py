from typing import Sequence

from heraldic.cli.app import *
from heraldic.cli.config import *
from heraldic.cli.formatting import *
from heraldic.cli.manifest import *

__all__: Sequence[str] = (
    "app",
    "main",
    "EXIT_CLAIM_FAILED",
    "EXIT_USAGE",
    "EXIT_NUMERIC",
    "EXIT_INFEASIBLE",
    "TARGET_FAMILIES",
    "SearchConfig",
    "load_problem",
    "load_stage2",
    "load_search_config",
    "format_probability",
    "herald_json",
    "verification_json",
    "dumps",
    "RunManifest",
    "artifact_version",
)
