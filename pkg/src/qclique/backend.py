"""Bridge to external MILP solver processes.

A backend is any executable that accepts a model file and writes a solution
file: the command is a template whose {model}, {solution} and {timelimit}
placeholders are substituted per token. The solution file carries one
"name value" line per variable (missing names default to zero) or a single
INFEASIBLE / TIMELIMIT marker as its first token.

Nothing a backend reports is trusted: assignments are re-checked against
the exact model within a fixed tolerance, and objectives are recomputed
from the graph by callers. Validation failures and process failures are
distinct errors so that a wrong answer is never mistaken for a crash.
"""

from __future__ import annotations

import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .lpio import FormatError, export_lp, export_mps, parse_solution_file
from .milp import LinearModel
from .solve import SolveStatus

TOLERANCE = Fraction(1, 10**6)


class BackendError(RuntimeError):
    """Base class for backend bridge failures."""


class BackendProcessError(BackendError):
    """The process failed: bad template, crash, or unusable output file."""


class BackendValidationError(BackendError):
    """The process answered, but the answer violates the model."""


class ModelFormat(str, Enum):
    LP = "lp"
    MPS = "mps"


@dataclass(frozen=True)
class BackendConfig:
    """How to invoke one external solver process.

    command is a template such as "highs {model} {solution} {timelimit}";
    solution_path overrides where the output file is expected (default: next
    to the model file). The time limit is passed to the process and also
    enforced as a hard wall-clock kill.
    """

    command: str
    model_format: ModelFormat = ModelFormat.LP
    time_limit: float = 3600.0
    solution_path: str | None = None

    def __post_init__(self) -> None:
        if not self.command.strip():
            raise BackendError("backend command is empty")
        if self.time_limit <= 0:
            raise BackendError(
                f"time limit must be positive, got {self.time_limit}"
            )


@dataclass(frozen=True)
class BackendResult:
    status: SolveStatus
    assignment: dict[str, Fraction] | None
    elapsed: float


def _substitute(command: str, mapping: dict[str, str]) -> list[str]:
    tokens = shlex.split(command)
    if not tokens:
        raise BackendProcessError("backend command is empty after splitting")
    substituted = []
    for token in tokens:
        try:
            substituted.append(token.format(**mapping))
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendProcessError(
                f"bad placeholder in backend command token {token!r}: {exc}"
            ) from None
    return substituted


def solve_external(model: LinearModel, cfg: BackendConfig) -> BackendResult:
    """Export the model, run the backend, and validate what it wrote.

    Returns OPTIMAL with the checked assignment, or INFEASIBLE / TIME_LIMIT
    (assignment None) when the output file starts with the corresponding
    marker or the process outlives its limit. Raises BackendProcessError for
    crashes and unusable files, BackendValidationError for assignments that
    violate the model beyond the fixed tolerance.
    """
    start = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="qclique-backend-") as scratch:
        model_path = Path(scratch) / f"model.{cfg.model_format.value}"
        if cfg.model_format is ModelFormat.MPS:
            model_path.write_text(export_mps(model), encoding="utf-8")
        else:
            model_path.write_text(export_lp(model), encoding="utf-8")
        solution_path = (
            Path(cfg.solution_path)
            if cfg.solution_path is not None
            else Path(scratch) / "model.sol"
        )
        argv = _substitute(
            cfg.command,
            {
                "model": str(model_path),
                "solution": str(solution_path),
                "timelimit": str(cfg.time_limit),
            },
        )
        try:
            run = subprocess.run(
                argv, capture_output=True, text=True, timeout=cfg.time_limit
            )
        except subprocess.TimeoutExpired:
            return BackendResult(
                SolveStatus.TIME_LIMIT, None, time.monotonic() - start
            )
        except OSError as exc:
            raise BackendProcessError(f"cannot run backend {argv[0]!r}: {exc}")
        if run.returncode != 0:
            tail = run.stderr.strip().splitlines()[-3:]
            raise BackendProcessError(
                f"backend exited with code {run.returncode}: "
                + (" / ".join(tail) if tail else "no diagnostics")
            )
        if not solution_path.exists():
            raise BackendProcessError(
                f"backend wrote no solution file at {solution_path}"
            )
        text = solution_path.read_text(encoding="utf-8")
    elapsed = time.monotonic() - start

    head = text.split(None, 1)
    marker = head[0].upper() if head else ""
    if marker == "INFEASIBLE":
        return BackendResult(SolveStatus.INFEASIBLE, None, elapsed)
    if marker == "TIMELIMIT":
        return BackendResult(SolveStatus.TIME_LIMIT, None, elapsed)
    try:
        assignment = parse_solution_file(model, text)
    except FormatError as exc:
        raise BackendProcessError(f"unusable solution file: {exc}") from None
    report = model.evaluate(assignment, tol=TOLERANCE)
    if not report.feasible or not report.integral:
        worst = ", ".join(
            f"{name} by {float(amount):.3g}"
            for name, amount in report.violations[:3]
        )
        kind = "constraint violations" if not report.feasible else "fractional binaries"
        raise BackendValidationError(
            f"backend assignment rejected ({kind}"
            + (f": {worst})" if worst else ")")
        )
    return BackendResult(SolveStatus.OPTIMAL, assignment, elapsed)


def extract_vertex_set(
    layout, assignment: dict[str, Fraction], tol: Fraction = TOLERANCE
) -> tuple[int, ...]:
    """Selected vertices from an assignment's indicator variables.

    Each indicator must be integral within tol; vertices with value at least
    one half are selected. Objectives are for the caller to recompute from
    the graph, never to read off the assignment.
    """
    chosen = []
    for vertex, name in enumerate(layout.x):
        value = assignment[name]
        if min(abs(value), abs(value - 1)) > tol:
            raise BackendValidationError(
                f"indicator {name} is fractional: {float(value):.6f}"
            )
        if value >= Fraction(1, 2):
            chosen.append(vertex)
    return tuple(chosen)
