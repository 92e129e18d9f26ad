"""Connectivity by cut separation for the fixed-cardinality problem.

The loop solves the unrestricted edge-count model, and whenever the answer
comes back disconnected, adds one neighborhood inequality per vertex of
each small fragment (a selected fragment vertex demands a selected fragment
neighbor) and re-solves with the accumulated pool. A disconnected answer
always violates at least one of its own cuts, so every round strictly
shrinks the candidate space and the loop terminates.

Three interchangeable inner optimizers are supported: "bnb" enumerates
subsets directly while honoring the pooled cuts, "milp" solves the built
model with the bundled HiGHS engine, and a BackendConfig routes the model
to an external solver process.
"""

from __future__ import annotations

import logging
import time
from dataclasses import replace

from .backend import BackendConfig, extract_vertex_set, solve_external
from .formulations import ProblemSpec, build_m1, lazy_cuts
from .graphs import Graph, induced_edge_count, is_connected
from .milp import LinearConstraint
from .solve import (
    Limits,
    Solution,
    SolveError,
    SolveStatus,
    _Budget,
    _LimitHit,
    _mask_members,
    _static_order,
)

logger = logging.getLogger(__name__)

ENGINES = ("bnb", "milp")


def solve_lazy(
    g: Graph,
    k: int,
    engine: str | BackendConfig = "bnb",
    limits: Limits = Limits(),
) -> Solution:
    """Largest edge count over connected k-vertex sets, via cut rounds.

    engine is "bnb" (direct enumeration, the default), "milp" (bundled
    HiGHS), or a BackendConfig for an external process. The returned
    Solution is either connected-and-optimal, infeasible (no connected
    k-set exists), or a limit status; cut_rounds counts the separation
    rounds that were needed. The time limit spans all rounds together.
    """
    if isinstance(engine, str) and engine not in ENGINES:
        raise SolveError(
            f"unknown engine {engine!r}: expected one of {ENGINES} "
            "or a BackendConfig"
        )
    spec = ProblemSpec.dks(k)
    spec.validate_for(g)
    start = time.monotonic()
    pool: dict[str, LinearConstraint] = {}
    rounds = 0
    nodes = 0

    def finish(
        vertices: tuple[int, ...], objective: int, status: SolveStatus
    ) -> Solution:
        return Solution(
            vertices=vertices,
            objective=objective,
            status=status,
            elapsed=time.monotonic() - start,
            nodes_explored=nodes,
            cut_rounds=rounds,
        )

    while True:
        remaining = None
        if limits.time_seconds is not None:
            remaining = limits.time_seconds - (time.monotonic() - start)
            if remaining <= 0:
                return finish((), 0, SolveStatus.TIME_LIMIT)
        status, members, inner_nodes = _solve_inner(
            g, k, pool, engine, remaining, limits
        )
        nodes += inner_nodes
        if status is SolveStatus.INFEASIBLE:
            return finish((), 0, SolveStatus.INFEASIBLE)
        if status is not SolveStatus.OPTIMAL:
            if members and is_connected(g, members):
                return finish(members, induced_edge_count(g, members), status)
            return finish((), 0, status)
        if is_connected(g, members):
            return finish(
                members, induced_edge_count(g, members), SolveStatus.OPTIMAL
            )
        fresh = [cut for cut in lazy_cuts(g, members, k) if cut.tag not in pool]
        if not fresh:
            raise AssertionError(
                "separation made no progress on a disconnected solution"
            )
        for cut in fresh:
            pool[cut.tag] = cut
        logger.info(
            "round %d: %s is disconnected; adding %d cuts (%d pooled)",
            rounds,
            members,
            len(fresh),
            len(pool),
        )
        rounds += 1


def _solve_inner(
    g: Graph,
    k: int,
    pool: dict[str, LinearConstraint],
    engine: str | BackendConfig,
    remaining: float | None,
    limits: Limits,
) -> tuple[SolveStatus, tuple[int, ...], int]:
    """One full solve of the edge-count model plus pooled cuts."""
    if engine == "bnb":
        inner_limits = Limits(
            time_seconds=remaining, memory_bytes=limits.memory_bytes
        )
        return _search_with_cuts(g, k, pool.values(), inner_limits)
    model, layout = build_m1(g, k)
    for cut in pool.values():
        model.add_constraint(cut.terms, cut.sense, cut.rhs, tag=cut.tag)
    if engine == "milp":
        from .highs import solve_model

        status, assignment = solve_model(model, time_limit=remaining)
        if assignment is None or status is SolveStatus.INFEASIBLE:
            return status, (), 0
        return status, extract_vertex_set(layout, assignment), 0
    cfg = engine
    if remaining is not None and remaining < cfg.time_limit:
        cfg = replace(cfg, time_limit=remaining)
    result = solve_external(model, cfg)
    if result.assignment is None:
        return result.status, (), 0
    return result.status, extract_vertex_set(layout, result.assignment), 0


def _compile_cuts(
    g: Graph, pool
) -> list[tuple[int, int]]:
    """Each cut as (fragment vertex, neighborhood mask) for mask checks."""
    compiled = []
    for cut in pool:
        fragment_vertex = None
        neighborhood = 0
        for name, coef in cut.terms.items():
            vertex = int(name.split("_", 1)[1])
            if coef < 0:
                fragment_vertex = vertex
            else:
                neighborhood |= 1 << vertex
        if fragment_vertex is None:
            raise AssertionError(f"cut {cut.tag} has no fragment vertex")
        compiled.append((fragment_vertex, neighborhood))
    return compiled


def _search_with_cuts(
    g: Graph, k: int, pool, limits: Limits
) -> tuple[SolveStatus, tuple[int, ...], int]:
    """Enumeration over k-subsets that honors the pooled cuts exactly."""
    budget = _Budget(limits)
    masks = g.masks
    order = _static_order(g)
    cuts = _compile_cuts(g, pool)
    best_edges = -1
    best: tuple[int, ...] | None = None
    nodes = 0
    stack: list[tuple[int, int, int]] = [(0, (1 << g.n) - 1, 0)]
    status = SolveStatus.OPTIMAL
    try:
        while stack:
            chosen, candidates, edges = stack.pop()
            nodes += 1
            budget.tick()
            reachable = chosen | candidates
            if any(
                chosen >> j & 1 and not reachable & neighborhood
                for j, neighborhood in cuts
            ):
                continue
            size = chosen.bit_count()
            if size == k:
                if edges > best_edges and all(
                    not chosen >> j & 1 or chosen & neighborhood
                    for j, neighborhood in cuts
                ):
                    best_edges, best = edges, _mask_members(chosen)
                continue
            if size + candidates.bit_count() < k:
                continue
            region = chosen | candidates
            weights = sorted(
                (
                    (masks[v] & region).bit_count()
                    for v in _mask_members(candidates)
                ),
                reverse=True,
            )
            bound = min(
                edges + sum(weights[: k - size]),
                k * (k - 1) // 2 - (size * (size - 1) // 2 - edges),
            )
            if bound <= best_edges:
                continue
            vertex = next(v for v in order if candidates >> v & 1)
            bit = 1 << vertex
            stack.append((chosen, candidates ^ bit, edges))
            stack.append(
                (
                    chosen | bit,
                    candidates ^ bit,
                    edges + (masks[vertex] & chosen).bit_count(),
                )
            )
    except _LimitHit as hit:
        status = hit.status
    if best is None:
        terminal = (
            SolveStatus.INFEASIBLE if status is SolveStatus.OPTIMAL else status
        )
        return terminal, (), nodes
    return status, best, nodes
