"""Tests for the exact combinatorial solvers."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qclique.formulations import Connectivity, FormulationError, ProblemSpec
from qclique.graphs import Graph, density, induced_edge_count, is_connected
from qclique.solve import (
    Limits,
    SolveError,
    SolveStatus,
    branch_and_bound,
    brute_force,
    meets_density,
)

from conftest import graphs, make_two_k4s, random_graph

GAMMAS = [
    Fraction(1, 10),
    Fraction(3, 10),
    Fraction(1, 2),
    Fraction(2, 3),
    Fraction(7, 10),
    Fraction(9, 10),
    Fraction(1),
]


def assert_feasible(g: Graph, spec: ProblemSpec, solution) -> None:
    """Structural checks every optimal solution must satisfy."""
    assert solution.status is SolveStatus.OPTIMAL
    members = solution.vertices
    assert members == tuple(sorted(set(members)))
    edges = induced_edge_count(g, members)
    if spec.problem.value == "mqc":
        assert solution.objective == len(members)
        assert meets_density(edges, len(members), spec.gamma)
        if len(members) >= 2:
            assert density(g, members) >= spec.gamma
    else:
        assert len(members) == spec.k
        assert solution.objective == edges
    if spec.connected:
        assert is_connected(g, members)


class TestLimits:
    def test_defaults(self):
        limits = Limits()
        assert limits.time_seconds == 3600.0
        assert limits.memory_bytes == 10 * 10**9

    @pytest.mark.parametrize("bad", [0, -1.5])
    def test_time_limit_must_be_positive(self, bad):
        with pytest.raises(SolveError, match="time limit"):
            Limits(time_seconds=bad)

    def test_memory_limit_must_be_positive(self):
        with pytest.raises(SolveError, match="memory limit"):
            Limits(memory_bytes=0)

    def test_none_disables(self):
        limits = Limits(time_seconds=None, memory_bytes=None)
        assert limits.time_seconds is None


class TestMeetsDensity:
    def test_small_sets_always_pass(self):
        assert meets_density(0, 0, Fraction(1))
        assert meets_density(0, 1, Fraction(1))

    def test_exact_threshold(self):
        # 9 edges on 7 vertices is exactly density 3/7.
        assert meets_density(9, 7, Fraction(3, 7))
        assert not meets_density(8, 7, Fraction(3, 7))

    @given(
        edges=st.integers(min_value=0, max_value=300),
        size=st.integers(min_value=2, max_value=25),
        num=st.integers(min_value=1, max_value=100),
        den=st.integers(min_value=1, max_value=100),
    )
    def test_matches_rational_comparison(self, edges, size, num, den):
        gamma = Fraction(num, den)
        expected = Fraction(2 * edges, size * (size - 1)) >= gamma
        assert meets_density(edges, size, gamma) == expected


class TestBruteForceThreshold:
    def test_triangle_is_its_own_optimum(self, triangle):
        solution = brute_force(triangle, ProblemSpec.mqc(Fraction(1, 2)))
        assert solution.vertices == (0, 1, 2)
        assert solution.objective == 3
        assert solution.status is SolveStatus.OPTIMAL

    def test_path_at_full_density_picks_an_edge(self, path3):
        solution = brute_force(path3, ProblemSpec.mqc(Fraction(1)))
        assert solution.vertices == (0, 1)
        assert solution.objective == 2

    def test_lexicographic_tie_break(self):
        g = Graph.build(4, [(2, 3), (0, 1)])
        solution = brute_force(g, ProblemSpec.mqc(Fraction(1)))
        assert solution.vertices == (0, 1)

    def test_edgeless_graph_keeps_a_singleton(self):
        g = Graph.build(3, [])
        solution = brute_force(g, ProblemSpec.mqc(Fraction(1, 2)))
        assert solution.vertices == (0,)
        assert solution.objective == 1

    def test_connected_variant_shrinks_two_blocks(self, two_k4s):
        free = brute_force(two_k4s, ProblemSpec.mqc(Fraction(3, 7)))
        tied = brute_force(
            two_k4s, ProblemSpec.mqc(Fraction(3, 7), mode=Connectivity.MPR)
        )
        assert free.objective == 8
        assert not is_connected(two_k4s, free.vertices)
        assert tied.objective == 7
        assert is_connected(two_k4s, tied.vertices)

    def test_enumeration_size_guard(self):
        g = Graph.build(26, [])
        with pytest.raises(SolveError, match="n <= 25"):
            brute_force(g, ProblemSpec.mqc(Fraction(1, 2)))

    @given(data=st.data())
    @settings(deadline=None, max_examples=40)
    def test_monotone_in_gamma(self, data):
        g = data.draw(graphs(min_n=1, max_n=7))
        low = data.draw(st.sampled_from(GAMMAS))
        high = data.draw(st.sampled_from(GAMMAS))
        if low > high:
            low, high = high, low
        loose = brute_force(g, ProblemSpec.mqc(low))
        tight = brute_force(g, ProblemSpec.mqc(high))
        assert loose.objective >= tight.objective


class TestBruteForceFixed:
    def test_two_blocks_without_connectivity(self, two_k4s):
        solution = brute_force(two_k4s, ProblemSpec.dks(8))
        assert solution.vertices == (0, 1, 2, 3, 4, 5, 6, 7)
        assert solution.objective == 12

    def test_two_blocks_with_connectivity(self, two_k4s):
        solution = brute_force(
            two_k4s, ProblemSpec.dks(8, mode=Connectivity.CFLOW)
        )
        assert solution.objective == 10
        assert is_connected(two_k4s, solution.vertices)

    def test_lexicographic_first_winner(self):
        g = Graph.build(4, [(0, 1), (2, 3)])
        solution = brute_force(g, ProblemSpec.dks(2))
        assert solution.vertices == (0, 1)

    def test_connected_variant_reports_infeasibility(self):
        g = Graph.build(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        solution = brute_force(g, ProblemSpec.dks(5, mode=Connectivity.CSTREE))
        assert solution.status is SolveStatus.INFEASIBLE
        assert solution.vertices == ()
        assert solution.objective == 0

    def test_size_exceeding_graph_is_rejected(self, triangle):
        with pytest.raises(FormulationError, match="exceeds vertex count"):
            brute_force(triangle, ProblemSpec.dks(4))

    def test_combination_budget_guard(self):
        g = Graph.build(40, [])
        with pytest.raises(SolveError, match="enumeration budget"):
            brute_force(g, ProblemSpec.dks(20))


class TestBranchAndBound:
    def test_triangle_connected_threshold(self, triangle):
        spec = ProblemSpec.mqc(Fraction(1, 2), mode=Connectivity.CSTREE)
        solution = branch_and_bound(triangle, spec)
        assert solution.objective == 3
        assert solution.status is SolveStatus.OPTIMAL

    @pytest.mark.parametrize(
        "spec, expected",
        [
            (ProblemSpec.dks(8), 12),
            (ProblemSpec.dks(8, mode=Connectivity.CFLOW), 10),
            (ProblemSpec.mqc(Fraction(3, 7)), 8),
            (ProblemSpec.mqc(Fraction(3, 7), mode=Connectivity.MPR), 7),
        ],
    )
    def test_two_blocks_landmarks(self, two_k4s, spec, expected):
        solution = branch_and_bound(two_k4s, spec)
        assert solution.objective == expected
        assert_feasible(two_k4s, spec, solution)

    def test_connected_variant_infeasibility(self):
        g = Graph.build(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        spec = ProblemSpec.dks(5, mode=Connectivity.CSTREE)
        solution = branch_and_bound(g, spec)
        assert solution.status is SolveStatus.INFEASIBLE
        assert solution.vertices == ()

    def test_deterministic_replay(self, two_k4s):
        spec = ProblemSpec.mqc(Fraction(1, 2), mode=Connectivity.CSTREE)
        first = branch_and_bound(two_k4s, spec)
        second = branch_and_bound(two_k4s, spec)
        assert first.vertices == second.vertices
        assert first.nodes_explored == second.nodes_explored

    def test_counters_are_populated(self, two_k4s):
        solution = branch_and_bound(two_k4s, ProblemSpec.dks(4))
        assert solution.nodes_explored > 0
        assert solution.elapsed >= 0.0
        assert solution.cut_rounds is None

    @given(data=st.data())
    @settings(deadline=None, max_examples=60)
    def test_matches_enumeration_on_threshold(self, data):
        g = data.draw(graphs(min_n=1, max_n=8))
        gamma = data.draw(st.sampled_from(GAMMAS))
        connected = data.draw(st.booleans())
        mode = Connectivity.CSTREE if connected else Connectivity.NONE
        spec = ProblemSpec.mqc(gamma, mode=mode)
        exact = brute_force(g, spec)
        fast = branch_and_bound(g, spec)
        assert fast.objective == exact.objective
        assert_feasible(g, spec, fast)

    @given(data=st.data())
    @settings(deadline=None, max_examples=60)
    def test_matches_enumeration_on_fixed(self, data):
        g = data.draw(graphs(min_n=2, max_n=8))
        k = data.draw(st.integers(min_value=2, max_value=g.n))
        connected = data.draw(st.booleans())
        mode = Connectivity.CSTREE if connected else Connectivity.NONE
        spec = ProblemSpec.dks(k, mode=mode)
        exact = brute_force(g, spec)
        fast = branch_and_bound(g, spec)
        assert fast.status is exact.status
        assert fast.objective == exact.objective
        if fast.status is SolveStatus.OPTIMAL:
            assert_feasible(g, spec, fast)

    @given(data=st.data())
    @settings(deadline=None, max_examples=40)
    def test_connectivity_never_helps(self, data):
        g = data.draw(graphs(min_n=1, max_n=8))
        gamma = data.draw(st.sampled_from(GAMMAS))
        free = branch_and_bound(g, ProblemSpec.mqc(gamma))
        tied = branch_and_bound(
            g, ProblemSpec.mqc(gamma, mode=Connectivity.CSTREE)
        )
        assert tied.objective <= free.objective


def _hard_instance() -> tuple[Graph, ProblemSpec]:
    """A seeded instance whose search tree comfortably exceeds one poll."""
    rng = random.Random(4242)
    g = random_graph(rng, 20, 0.5)
    return g, ProblemSpec.mqc(Fraction(3, 4))


class TestResourceLimits:
    def test_instance_is_actually_hard(self):
        g, spec = _hard_instance()
        solution = branch_and_bound(g, spec)
        assert solution.status is SolveStatus.OPTIMAL
        assert solution.nodes_explored > 2000

    def test_time_limit_returns_incumbent(self):
        g, spec = _hard_instance()
        solution = branch_and_bound(g, spec, Limits(time_seconds=1e-9))
        assert solution.status is SolveStatus.TIME_LIMIT
        assert solution.vertices
        assert meets_density(
            induced_edge_count(g, solution.vertices),
            len(solution.vertices),
            spec.gamma,
        )

    def test_memory_limit_returns_incumbent(self):
        g, spec = _hard_instance()
        solution = branch_and_bound(g, spec, Limits(memory_bytes=1))
        assert solution.status is SolveStatus.MEMORY_LIMIT
        assert solution.vertices

    def test_limited_run_does_less_work(self):
        g, spec = _hard_instance()
        full = branch_and_bound(g, spec)
        cut = branch_and_bound(g, spec, Limits(time_seconds=1e-9))
        assert cut.nodes_explored <= full.nodes_explored
