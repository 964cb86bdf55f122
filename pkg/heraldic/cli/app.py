from __future__ import annotations

import asyncio
import json
import logging
import os
from contextlib import contextmanager
from dataclasses import replace
from logging import getLogger
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

import numpy as np
import typer

from heraldic.circuit import CircuitSpec, clements_decompose, compose, count_nontrivial
from heraldic.cli.config import load_problem, load_search_config, load_stage2
from heraldic.cli.formatting import dumps, herald_json, verification_json
from heraldic.cli.manifest import RunManifest
from heraldic.exceptions import (
    ConfigError,
    DimensionError,
    HeraldicException,
    InvalidStateError,
    NotUnitaryError,
)
from heraldic.fock import FockState, ProblemSpec, TargetState, herald_analysis
from heraldic.internal import ensure_unitary, matrix_from_json
from heraldic.optimizer import Candidate, run_stage1_async, stage2_refine
from heraldic.schemes import get_scheme, parse_claims, scheme_names, verify_scheme

__all__: Sequence[str] = (
    "app",
    "main",
    "EXIT_CLAIM_FAILED",
    "EXIT_USAGE",
    "EXIT_NUMERIC",
    "EXIT_INFEASIBLE",
)

_log = getLogger(__name__)

EXIT_CLAIM_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_INFEASIBLE = 4

_UNITARITY_TOLERANCE = 1e-8

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Design and verify heralded linear-optics circuits.",
)


@app.callback()
def main_callback() -> None:
    """Design and verify heralded linear-optics circuits."""
    level = os.environ.get("HERALDIC_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Translate library errors into the command line's exit codes."""
    try:
        yield
    except NotUnitaryError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_NUMERIC) from e
    except HeraldicException as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE) from e
    except json.JSONDecodeError as e:
        typer.echo(f"error: malformed JSON: {e}", err=True)
        raise typer.Exit(EXIT_USAGE) from e
    except OSError as e:
        typer.echo(f"error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE) from e


def _read_json(path: Path) -> Any:
    with path.open(encoding="utf-8") as f:
        return json.load(f)


def _emit(document: dict[str, Any], out: Path | None) -> None:
    text = dumps(document)
    if out is None:
        typer.echo(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")


def _parse_state(text: str) -> FockState:
    stripped = text.strip()
    if stripped.startswith("["):
        return FockState.from_json(json.loads(stripped), field="input")
    try:
        return FockState(tuple(int(n) for n in stripped.replace(" ", "").split(",")))
    except ValueError as e:
        raise InvalidStateError(f"`input` must be comma separated integers, got {text!r}.") from e


def _load_unitary(document: Any) -> np.ndarray[Any, Any]:
    if isinstance(document, dict) and "elements" in document:
        return compose(CircuitSpec.from_json(document))
    return ensure_unitary(matrix_from_json(document), _UNITARITY_TOLERANCE, field="matrix")


_OUT = typer.Option(None, "--out", help="Write the JSON output here instead of stdout.")


@app.command("verify")
def verify(
    scheme: str = typer.Argument(..., help="Name of a built-in scheme."),
    claims: Optional[Path] = typer.Option(
        None, "--claims", help="JSON claim file replacing the scheme's own claims."
    ),
    export: Optional[Path] = typer.Option(
        None, "--export", help="Also write the scheme's circuit JSON here."
    ),
    out: Optional[Path] = _OUT,
) -> None:
    """Check a built-in scheme against its published numbers."""
    with _exit_codes():
        entry = get_scheme(scheme)
        claim_set = entry.claims()
        if claims is not None:
            claim_set = parse_claims(_read_json(claims), claim_set.problem)

        manifest = RunManifest.for_config(
            "verify", {"scheme": scheme, "claims": [c.describe() for c in claim_set.claims]}
        )
        with manifest.phase("build"):
            circuit = entry.build()
        with manifest.phase("verify"):
            report = verify_scheme(circuit, claim_set)
            if entry.details is not None and report.herald is not None:
                report = replace(report, details=entry.details(report.herald))

        if export is not None:
            _emit(circuit.to_json(), export)

        document: dict[str, Any] = {
            "manifest": manifest.to_json(),
            "scheme": scheme,
            "description": entry.description,
            "report": verification_json(report),
        }
        if report.herald is not None:
            document["herald"] = herald_json(report.herald)
        _emit(document, out)

    if not report.passed:
        _log.warning("%d of %d claims failed", len(report.failures), len(report.results))
        raise typer.Exit(EXIT_CLAIM_FAILED)


@app.command("simulate")
def simulate(
    circuit: Path = typer.Argument(..., help="Circuit JSON or a {dim, matrix} document."),
    input: str = typer.Option(..., "--input", help="Input occupations, e.g. 1,1,0,0."),
    patterns: Optional[Path] = typer.Option(
        None, "--patterns", help="JSON array of ancilla patterns. Omit to measure nothing."
    ),
    targets: Optional[Path] = typer.Option(
        None, "--targets", help="JSON array of target states."
    ),
    out: Optional[Path] = _OUT,
) -> None:
    """Send an input state through a circuit and measure the ancilla modes."""
    with _exit_codes():
        document = _read_json(circuit)
        unitary = _load_unitary(document)
        state = _parse_state(input)
        pattern_list = [] if patterns is None else _read_json(patterns)
        if not isinstance(pattern_list, list):
            raise DimensionError("`patterns` must be a JSON array.")
        ancillas = tuple(FockState.from_json(p, field="patterns") for p in pattern_list)
        n_ancilla = ancillas[0].n_modes if ancillas else 0
        target_list = [] if targets is None else _read_json(targets)
        if not isinstance(target_list, list):
            raise InvalidStateError("`targets` must be a JSON array.")

        problem = ProblemSpec(
            n_target_modes=unitary.shape[0] - n_ancilla,
            n_ancilla_modes=n_ancilla,
            input=state,
            ancilla_patterns=ancillas,
            targets=tuple(TargetState.from_json(t) for t in target_list),
        )
        manifest = RunManifest.for_config(
            "simulate", {"circuit": document, "problem": problem.to_json()}
        )
        with manifest.phase("simulate"):
            report = herald_analysis(unitary, problem)
        _emit({"manifest": manifest.to_json(), "report": herald_json(report)}, out)


@app.command("search")
def search(
    config: Path = typer.Argument(..., help="Search config JSON."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed override."),
    workers: int = typer.Option(
        os.cpu_count() or 1, "--workers", help="Worker processes for the restarts."
    ),
    out: Optional[Path] = _OUT,
) -> None:
    """Run the stage one search and dump every accepted candidate."""
    with _exit_codes():
        resolved = load_search_config(_read_json(config), seed=seed, workers=workers)
        stage1 = resolved.stage1
        manifest = RunManifest.for_config("search", resolved.resolved(), stage1.master_seed)
        with manifest.phase("search"):
            report = asyncio.run(run_stage1_async(stage1))
        _emit(
            {
                "manifest": manifest.to_json(),
                "config": resolved.resolved(),
                "problem": stage1.spec.to_json(),
                **report.to_json(),
            },
            out,
        )


@app.command("refine")
def refine(
    candidates: Path = typer.Argument(..., help="Output of `search`."),
    config: Optional[Path] = typer.Option(
        None, "--config", help="Config JSON whose `stage2` block sets the refinement."
    ),
    index: int = typer.Option(0, "--index", help="Which candidate of the dump to refine."),
    out: Optional[Path] = _OUT,
) -> None:
    """Simplify the circuit of a searched candidate under its herald constraints."""
    with _exit_codes():
        dump = _read_json(candidates)
        if not isinstance(dump, dict) or "problem" not in dump or "candidates" not in dump:
            raise ConfigError("A candidate file needs `problem` and `candidates`.")
        problem = load_problem(dump["problem"])
        entries = dump["candidates"]
        if not isinstance(entries, list):
            raise ConfigError("`candidates` must be a JSON array.")
        if not 0 <= index < len(entries):
            raise ConfigError(f"`--index` {index} is out of range for {len(entries)} candidates.")
        candidate = Candidate.from_json(entries[index], problem)

        settings = load_stage2(_read_json(config) if config is not None else {})
        manifest = RunManifest.for_config(
            "refine", {"candidate": entries[index], "stage2": settings.to_json()}
        )
        with manifest.phase("refine"):
            result = stage2_refine(candidate, settings)
        _emit({"manifest": manifest.to_json(), **result.to_json()}, out)

    if not result.feasible:
        for name, shortfall in result.residuals.items():
            if shortfall:
                typer.echo(f"infeasible: {name} short by {shortfall:.3g}", err=True)
        raise typer.Exit(EXIT_INFEASIBLE)


@app.command("decompose")
def decompose(
    matrix: Path = typer.Argument(..., help="A {dim, matrix} document."),
    out: Optional[Path] = _OUT,
) -> None:
    """Factor a unitary into two-mode elements and output phases."""
    with _exit_codes():
        document = _read_json(matrix)
        unitary = ensure_unitary(matrix_from_json(document), _UNITARITY_TOLERANCE, field="matrix")
        manifest = RunManifest.for_config("decompose", document)
        with manifest.phase("decompose"):
            spec = clements_decompose(unitary)
        residual = float(np.linalg.norm(compose(spec) - unitary))
        _emit(
            {
                "manifest": manifest.to_json(),
                "circuit": spec.to_json(),
                "nontrivial": count_nontrivial(spec),
                "residual": residual,
            },
            out,
        )


@app.command("schemes")
def schemes() -> None:
    """List the built-in schemes."""
    for name in scheme_names():
        typer.echo(f"{name}: {get_scheme(name).description}")


def main() -> None:
    app()

