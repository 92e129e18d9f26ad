"""Parameter-sweep harness with CSV persistence and resumable runs.

A grid solves one instance across a whole parameter range: the density
threshold swept from 0.10 to 1.00 in hundredths (91 cells) or the target
cardinality swept from 2 to n-1. The instance is reduced to its largest
connected component first, every cell is solved under the same per-cell
limits, and each outcome is appended to a CSV that doubles as the resume
state: cells already present are never recomputed, and an interrupted run
continued later yields a byte-identical file.

Aggregation follows the reporting convention of the summary tables:
pct_succ counts cells resolved within the limits (optimal or proven
infeasible), pct_disc counts disconnected optima among optimal cells only,
and runtimes are averaged over resolved cells with a population standard
deviation.
"""

from __future__ import annotations

import csv
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from statistics import fmean, pstdev
from typing import Callable

from .backend import BackendConfig
from .driver import solve_problem
from .formulations import Connectivity, FormulationError, Problem, ProblemSpec
from .graphs import Graph, is_connected, largest_component
from .solve import Limits, SolveStatus

CSV_COLUMNS = ("param", "status", "objective", "connected", "elapsed", "nodes")

ERROR_STATUS = "error"


class GridError(ValueError):
    """Raised for unusable grid specifications or target files."""


@dataclass(frozen=True)
class GridSpec:
    """One instance swept over one parameter range.

    family picks the range: MQC sweeps gamma over {0.10, 0.11, ..., 1.00},
    DKS sweeps k over {2, ..., n-1} of the preprocessed instance.
    """

    name: str
    family: Problem
    mode: Connectivity = Connectivity.NONE
    engine: str | BackendConfig = "bnb"
    time_limit: float = 3600.0
    memory_bytes: int = 10 * 10**9

    def __post_init__(self) -> None:
        if not self.name.strip():
            raise GridError("grid needs a nonempty instance name")
        if self.time_limit <= 0:
            raise GridError(f"time limit must be positive, got {self.time_limit}")
        if self.memory_bytes <= 0:
            raise GridError(
                f"memory limit must be positive, got {self.memory_bytes}"
            )
        try:
            self.cell_spec(self.probe_param())
        except FormulationError as exc:
            raise GridError(str(exc)) from None

    def probe_param(self):
        return Fraction(1, 2) if self.family is Problem.MQC else 2

    def parameters(self, n: int) -> list:
        """The sweep values for an instance with n vertices."""
        if self.family is Problem.MQC:
            return [Fraction(i, 100) for i in range(10, 101)]
        return list(range(2, n))

    def cell_spec(self, param) -> ProblemSpec:
        if self.family is Problem.MQC:
            return ProblemSpec.mqc(param, mode=self.mode)
        return ProblemSpec.dks(param, mode=self.mode)

    def render_param(self, param) -> str:
        if self.family is Problem.MQC:
            return f"{float(param):.2f}"
        return str(param)


@dataclass(frozen=True)
class GridCell:
    """One solved (or failed) parameter cell, as persisted to CSV."""

    param: str
    status: str
    objective: int
    connected: bool
    elapsed: float
    nodes: int

    def to_csv(self) -> list[str]:
        return [
            self.param,
            self.status,
            str(self.objective),
            "true" if self.connected else "false",
            f"{self.elapsed:.6f}",
            str(self.nodes),
        ]

    @classmethod
    def from_csv(cls, row: list[str]) -> "GridCell":
        if len(row) != len(CSV_COLUMNS):
            raise GridError(f"malformed grid CSV row: {row!r}")
        return cls(
            param=row[0],
            status=row[1],
            objective=int(row[2]),
            connected=row[3] == "true",
            elapsed=float(row[4]),
            nodes=int(row[5]),
        )


@dataclass(frozen=True)
class GridRow:
    """Summary of one grid: the table-shaped aggregate over its cells."""

    name: str
    cells: int
    pct_succ: float
    pct_disc: float
    runtime_mean: float
    runtime_sd: float


def read_cells(path: Path) -> list[GridCell]:
    """Load previously computed cells; an absent file is an empty grid."""
    if not path.exists():
        return []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        rows = list(reader)
    if not rows:
        return []
    if tuple(rows[0]) != CSV_COLUMNS:
        raise GridError(f"unexpected grid CSV header: {rows[0]!r}")
    return [GridCell.from_csv(row) for row in rows[1:]]


def aggregate(name: str, cells: list[GridCell]) -> GridRow:
    """Fold cells into the summary row; empty grids aggregate to zeros."""
    total = len(cells)
    resolved = [
        c
        for c in cells
        if c.status in (SolveStatus.OPTIMAL.value, SolveStatus.INFEASIBLE.value)
    ]
    optimal = [c for c in cells if c.status == SolveStatus.OPTIMAL.value]
    disconnected = [c for c in optimal if not c.connected]
    pct_succ = 100.0 * len(resolved) / total if total else 0.0
    pct_disc = 100.0 * len(disconnected) / len(optimal) if optimal else 0.0
    times = [c.elapsed for c in resolved]
    return GridRow(
        name=name,
        cells=total,
        pct_succ=pct_succ,
        pct_disc=pct_disc,
        runtime_mean=fmean(times) if times else 0.0,
        runtime_sd=pstdev(times) if times else 0.0,
    )


def _solve_cell(
    g: Graph,
    spec: GridSpec,
    param,
    clock: Callable[[], float],
) -> GridCell:
    """Run one cell; engine failures become an error-status cell."""
    rendered = spec.render_param(param)
    limits = Limits(
        time_seconds=spec.time_limit, memory_bytes=spec.memory_bytes
    )
    started = clock()
    try:
        solution = solve_problem(g, spec.cell_spec(param), spec.engine, limits)
    except Exception:
        cell = GridCell(rendered, ERROR_STATUS, 0, False, clock() - started, 0)
        return GridCell.from_csv(cell.to_csv())
    elapsed = clock() - started
    connected = bool(solution.vertices) and is_connected(g, solution.vertices)
    cell = GridCell(
        param=rendered,
        status=solution.status.value,
        objective=solution.objective,
        connected=connected,
        elapsed=elapsed,
        nodes=solution.nodes_explored,
    )
    # Round-trip through the CSV encoding so the summary aggregated now is
    # bit-identical to one aggregated from the file later.
    return GridCell.from_csv(cell.to_csv())


def run_grid(
    g: Graph,
    spec: GridSpec,
    csv_path: str | Path,
    workers: int = 1,
    clock: Callable[[], float] = time.monotonic,
) -> GridRow:
    """Sweep the grid, persisting each cell, and return the summary.

    The instance is reduced to its largest connected component before
    solving. Cells already present in the CSV are kept as-is; missing ones
    are computed in deterministic parameter order and appended. The clock
    is injectable so tests can pin elapsed values.
    """
    if workers < 1:
        raise GridError(f"worker count must be at least 1, got {workers}")
    core, _ = largest_component(g)
    params = spec.parameters(core.n)
    if not params:
        raise GridError(
            f"empty parameter range for {spec.family.value} on n={core.n}"
        )
    path = Path(csv_path)
    existing = read_cells(path)
    done = {cell.param for cell in existing}
    pending = [p for p in params if spec.render_param(p) not in done]

    if pending:
        if workers == 1:
            fresh = [_solve_cell(core, spec, p, clock) for p in pending]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                fresh = list(
                    pool.map(lambda p: _solve_cell(core, spec, p, clock), pending)
                )
        write_header = not path.exists()
        with path.open("a", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            if write_header:
                writer.writerow(CSV_COLUMNS)
            for cell in fresh:
                writer.writerow(cell.to_csv())
        existing = existing + fresh
    return aggregate(spec.name, existing)
