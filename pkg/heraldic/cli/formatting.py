from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any, Sequence

from heraldic.utils import nearest_rational

if TYPE_CHECKING:
    from heraldic.fock import HeraldReport
    from heraldic.schemes import VerificationReport

__all__: Sequence[str] = ("format_probability", "herald_json", "verification_json", "dumps")


def format_probability(value: float) -> dict[str, Any]:
    """
    ### Example
    ```python
    format_probability(1 / 108)  # {"decimal": "0.00925925925925926", "rational": "1/108"}
    ```
    """
    rational = nearest_rational(value)
    return {
        "decimal": f"{value:.15g}",
        "rational": None if rational is None else str(rational),
    }


def herald_json(report: HeraldReport) -> dict[str, Any]:
    out = report.to_json()
    for entry in out["patterns"]:
        entry["probability_display"] = format_probability(entry["probability"])
    out["success_probability"] = format_probability(report.success_probability())
    return out


def verification_json(report: VerificationReport) -> dict[str, Any]:
    out = report.to_json()
    for claim in out["claims"]:
        if claim["type"] != "element_count":
            claim["measured_display"] = format_probability(claim["measured"])
    return out


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, ensure_ascii=False)
