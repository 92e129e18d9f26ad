"""One-call solve dispatch shared by the grid harness and the CLI.

solve_problem routes a ProblemSpec to the right machinery: the
combinatorial solvers, the cut-separation loop, the bundled HiGHS engine,
or an external backend process - building the matching model (edge-count
or threshold formulation plus the requested connectivity rows) when a
model-based engine is selected. Objectives are always recomputed from the
graph, and vertex sets come back in ascending order.
"""

from __future__ import annotations

import time
from dataclasses import replace

from .backend import BackendConfig, extract_vertex_set, solve_external
from .formulations import (
    Connectivity,
    Problem,
    ProblemSpec,
    VariableLayout,
    add_cflow,
    add_cstree,
    add_mpr,
    build_f3,
    build_m1,
    default_bounds,
)
from .graphs import Graph, induced_edge_count
from .lazy import solve_lazy
from .milp import LinearModel
from .solve import (
    Limits,
    Solution,
    SolveError,
    SolveStatus,
    branch_and_bound,
    brute_force,
)

ENGINES = ("bnb", "brute", "milp")


def build_problem_model(
    g: Graph, spec: ProblemSpec
) -> tuple[LinearModel, VariableLayout]:
    """The MILP for a spec: base formulation plus its connectivity rows.

    Cut separation has no static model, so LAZY mode is rejected here; use
    solve_problem (or solve_lazy directly) for it.
    """
    spec.validate_for(g)
    if spec.mode is Connectivity.LAZY:
        raise SolveError("cut separation builds no static model; solve instead")
    if spec.problem is Problem.DKS:
        model, layout = build_m1(g, spec.k)
        if spec.mode is Connectivity.CSTREE:
            model, layout = add_cstree(model, layout, g, spec.k)
        elif spec.mode is Connectivity.CFLOW:
            model, layout = add_cflow(model, layout, g, spec.k)
        return model, layout
    bounds = spec.bounds if spec.bounds is not None else default_bounds(g, spec.gamma)
    model, layout = build_f3(g, spec.gamma, bounds[0], bounds[1])
    if spec.mode is Connectivity.MPR:
        model, layout = add_mpr(model, layout, g, bounds[1])
    elif spec.mode is Connectivity.CSTREE:
        model, layout = add_cstree(model, layout, g, bounds[1])
    return model, layout


def solve_problem(
    g: Graph,
    spec: ProblemSpec,
    engine: str | BackendConfig = "bnb",
    limits: Limits = Limits(),
) -> Solution:
    """Solve a problem specification on the graph with the chosen engine.

    engine is "bnb" (branch and bound), "brute" (exhaustive oracle),
    "milp" (bundled HiGHS on the built model), or a BackendConfig for an
    external process. LAZY mode always runs the separation loop, reusing
    the engine for its inner solves ("brute" falls back to "bnb" there).
    """
    if isinstance(engine, str) and engine not in ENGINES:
        raise SolveError(
            f"unknown engine {engine!r}: expected one of {ENGINES} "
            "or a BackendConfig"
        )
    spec.validate_for(g)
    if spec.mode is Connectivity.LAZY:
        inner = "bnb" if engine == "brute" else engine
        return solve_lazy(g, spec.k, engine=inner, limits=limits)
    if engine == "bnb":
        return branch_and_bound(g, spec, limits)
    if engine == "brute":
        return brute_force(g, spec)
    return _solve_through_model(g, spec, engine, limits)


def _solve_through_model(
    g: Graph,
    spec: ProblemSpec,
    engine: str | BackendConfig,
    limits: Limits,
) -> Solution:
    start = time.monotonic()
    model, layout = build_problem_model(g, spec)
    if engine == "milp":
        from .highs import solve_model

        status, assignment = solve_model(model, time_limit=limits.time_seconds)
    else:
        cfg = engine
        if limits.time_seconds is not None and limits.time_seconds < cfg.time_limit:
            cfg = replace(cfg, time_limit=limits.time_seconds)
        result = solve_external(model, cfg)
        status, assignment = result.status, result.assignment
    elapsed = time.monotonic() - start
    if assignment is None or status is SolveStatus.INFEASIBLE:
        return Solution((), 0, status, elapsed=elapsed)
    vertices = extract_vertex_set(layout, assignment)
    if spec.problem is Problem.MQC:
        objective = len(vertices)
    else:
        objective = induced_edge_count(g, vertices)
    return Solution(vertices, objective, status, elapsed=elapsed)
