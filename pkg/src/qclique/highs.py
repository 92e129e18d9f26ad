"""Solve LinearModel instances with the HiGHS engine bundled in scipy.

The bridge converts exact-rational rows to floating point by scaling each
row to integers first (least common multiple of the denominators) whenever
the scaled magnitudes stay inside the 2**53 window where float conversion
is exact; rows that cannot be scaled safely fall back to plain conversion.
Assignments come back as exact binary fractions of the reported floats and
are validated by the caller, never trusted.

The module doubles as a command-line solver so it can serve as an external
backend process:

    python -m qclique.highs MODEL.lp OUT.sol [TIME_LIMIT_SECONDS]

The output file holds one "name value" line per variable, or a single
INFEASIBLE / TIMELIMIT marker.
"""

from __future__ import annotations

import argparse
from fractions import Fraction
from math import lcm
from pathlib import Path

import numpy as np
from scipy import optimize, sparse

from .lpio import parse_lp, parse_mps
from .milp import BINARY, LinearConstraint, LinearModel
from .solve import SolveStatus

_EXACT_WINDOW = 2**53


class HighsError(RuntimeError):
    """Raised when the engine reports neither an optimum nor a clean limit."""


def _row_floats(row: LinearConstraint) -> tuple[dict[str, float], float]:
    """Float coefficients and rhs for one row, exactly when possible."""
    denominators = [coef.denominator for coef in row.terms.values()]
    denominators.append(row.rhs.denominator)
    scale = lcm(*denominators)
    if scale <= _EXACT_WINDOW:
        scaled = {name: coef * scale for name, coef in row.terms.items()}
        rhs = row.rhs * scale
        if all(abs(v) <= _EXACT_WINDOW for v in scaled.values()) and (
            abs(rhs) <= _EXACT_WINDOW
        ):
            return {n: float(v) for n, v in scaled.items()}, float(rhs)
    return {n: float(v) for n, v in row.terms.items()}, float(row.rhs)


def solve_model(
    model: LinearModel, time_limit: float | None = None
) -> tuple[SolveStatus, dict[str, Fraction] | None]:
    """Run HiGHS on the model; return its status and raw assignment.

    The assignment maps every model variable to the exact Fraction of the
    float HiGHS reported (so validation downstream stays rational); it is
    None when the engine produced no point, as with infeasibility or a
    limit hit before the first incumbent.
    """
    if not model.variables:
        raise HighsError("model has no variables")
    index = {var.name: i for i, var in enumerate(model.variables)}
    n = len(model.variables)

    cost = np.zeros(n)
    for name, coef in model.objective.items():
        cost[index[name]] = -float(coef)
    integrality = np.array(
        [1 if var.kind == BINARY else 0 for var in model.variables]
    )
    lower = np.array(
        [-np.inf if var.lower is None else float(var.lower) for var in model.variables]
    )
    upper = np.array(
        [np.inf if var.upper is None else float(var.upper) for var in model.variables]
    )

    constraints = []
    if model.constraints:
        data, rows, cols = [], [], []
        row_lower = np.full(len(model.constraints), -np.inf)
        row_upper = np.full(len(model.constraints), np.inf)
        for r, row in enumerate(model.constraints):
            coefs, rhs = _row_floats(row)
            for name, value in coefs.items():
                data.append(value)
                rows.append(r)
                cols.append(index[name])
            if row.sense in ("<=", "="):
                row_upper[r] = rhs
            if row.sense in (">=", "="):
                row_lower[r] = rhs
        matrix = sparse.csr_matrix(
            (data, (rows, cols)), shape=(len(model.constraints), n)
        )
        constraints.append(optimize.LinearConstraint(matrix, row_lower, row_upper))

    options = {} if time_limit is None else {"time_limit": float(time_limit)}
    result = optimize.milp(
        c=cost,
        constraints=constraints,
        integrality=integrality,
        bounds=optimize.Bounds(lower, upper),
        options=options,
    )
    if result.status == 0:
        status = SolveStatus.OPTIMAL
    elif result.status == 1:
        status = SolveStatus.TIME_LIMIT
    elif result.status == 2:
        status = SolveStatus.INFEASIBLE
    else:
        raise HighsError(f"engine failure: {result.message}")
    if result.x is None:
        return status, None
    assignment = {
        var.name: Fraction(float(value))
        for var, value in zip(model.variables, result.x)
    }
    return status, assignment


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="python -m qclique.highs",
        description="Solve an LP/MPS model file and write a solution file.",
    )
    parser.add_argument("model", help="model file (.lp or .mps)")
    parser.add_argument("solution", help="output solution file")
    parser.add_argument(
        "timelimit", nargs="?", type=float, default=None, help="seconds"
    )
    args = parser.parse_args(argv)

    text = Path(args.model).read_text(encoding="utf-8")
    if args.model.lower().endswith(".mps"):
        model = parse_mps(text)
    else:
        model = parse_lp(text)
    status, assignment = solve_model(model, time_limit=args.timelimit)

    if status is SolveStatus.INFEASIBLE:
        payload = "INFEASIBLE\n"
    elif status is SolveStatus.TIME_LIMIT:
        payload = "TIMELIMIT\n"
    else:
        lines = [
            f"{name} {float(value)!r}"
            for name, value in sorted(assignment.items())
        ]
        payload = "\n".join(lines) + "\n"
    Path(args.solution).write_text(payload, encoding="utf-8")
    return 0


if __name__ == "__main__":  # pragma: no cover - exercised via subprocess
    raise SystemExit(main())
