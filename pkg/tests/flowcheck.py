"""Independent exact checkers backing the acceptance tests.

Everything here is deliberately self-contained (plain integers, standard
library only, no package imports) so it can act as an oracle for the
connectivity row systems: with the selection indicators fixed, the rooted
in-tree rows and the source-flow rows reduce to binary pattern choices plus
a continuous flow subsystem. The checkers enumerate the binary patterns
exhaustively and decide each flow subsystem exactly with integral max-flow,
so "satisfiable" answers carry no tolerance at all.
"""

from __future__ import annotations

from itertools import product


class FlowNetwork:
    """Edmonds-Karp max-flow over exact integer capacities."""

    def __init__(self, nodes: int) -> None:
        self.adj: list[list[list[int]]] = [[] for _ in range(nodes)]

    def add_arc(self, tail: int, head: int, capacity: int) -> None:
        self.adj[tail].append([head, capacity, len(self.adj[head])])
        self.adj[head].append([tail, 0, len(self.adj[tail]) - 1])

    def _augmenting_path(
        self, source: int, sink: int
    ) -> list[tuple[int, int] | None]:
        parent: list[tuple[int, int] | None] = [None] * len(self.adj)
        parent[source] = (source, -1)
        queue = [source]
        cursor = 0
        while cursor < len(queue) and parent[sink] is None:
            node = queue[cursor]
            cursor += 1
            for index, arc in enumerate(self.adj[node]):
                if arc[1] > 0 and parent[arc[0]] is None:
                    parent[arc[0]] = (node, index)
                    queue.append(arc[0])
        return parent

    def max_flow(self, source: int, sink: int) -> int:
        total = 0
        while True:
            parent = self._augmenting_path(source, sink)
            if parent[sink] is None:
                return total
            bottleneck: int | None = None
            node = sink
            while node != source:
                prev, index = parent[node]
                capacity = self.adj[prev][index][1]
                if bottleneck is None or capacity < bottleneck:
                    bottleneck = capacity
                node = prev
            node = sink
            while node != source:
                prev, index = parent[node]
                arc = self.adj[prev][index]
                arc[1] -= bottleneck
                self.adj[arc[0]][arc[2]][1] += bottleneck
                node = prev
            total += bottleneck


def feasible_flow(
    nodes: int,
    arcs: list[tuple[int, int, int, int]],
    net_supply: list[int],
) -> bool:
    """Exact feasibility of arc flows with bounds and node balances.

    Each arc is (tail, head, lower, capacity); net_supply[i] is the required
    outflow minus inflow at node i. Lower bounds are shifted out in the
    usual way and the remainder is decided by one max-flow run.
    """
    if sum(net_supply) != 0:
        return False
    residual = list(net_supply)
    network = FlowNetwork(nodes + 2)
    super_source, super_sink = nodes, nodes + 1
    for tail, head, lower, capacity in arcs:
        if lower > capacity:
            return False
        network.add_arc(tail, head, capacity - lower)
        residual[tail] -= lower
        residual[head] += lower
    demand = 0
    for node, value in enumerate(residual):
        if value > 0:
            network.add_arc(super_source, node, value)
            demand += value
        elif value < 0:
            network.add_arc(node, super_sink, -value)
    return network.max_flow(super_source, super_sink) == demand


def is_connected_subset(
    edges: tuple[tuple[int, int], ...], members: tuple[int, ...]
) -> bool:
    """Independent BFS connectivity check for an induced subgraph."""
    chosen = set(members)
    if len(chosen) <= 1:
        return True
    adjacency: dict[int, set[int]] = {v: set() for v in chosen}
    for i, j in edges:
        if i in chosen and j in chosen:
            adjacency[i].add(j)
            adjacency[j].add(i)
    start = members[0]
    seen = {start}
    stack = [start]
    while stack:
        for neighbor in adjacency[stack.pop()] - seen:
            seen.add(neighbor)
            stack.append(neighbor)
    return seen == chosen


def _inside_neighbors(
    edges: tuple[tuple[int, int], ...], members: tuple[int, ...]
) -> dict[int, list[int]]:
    chosen = set(members)
    adjacency: dict[int, list[int]] = {v: [] for v in members}
    for i, j in edges:
        if i in chosen and j in chosen:
            adjacency[i].append(j)
            adjacency[j].append(i)
    return adjacency


def cstree_satisfiable(
    n: int,
    edges: tuple[tuple[int, int], ...],
    members: tuple[int, ...],
    u: int,
) -> bool:
    """Can the rooted in-tree rows be satisfied with this exact selection?

    With the selection fixed, the binary arc-use pattern must give every
    member exactly one incoming arc (from a selected neighbor or from the
    artificial root), use exactly one root arc overall, and never use both
    directions of an edge. All such patterns are enumerated; for each one
    the arc flows are bounded by [1, u - 1] on member arcs and [1, u] on
    the root arc, the root must ship exactly |members| units, and every
    member must absorb exactly one. Unused arcs are pinned to zero.
    """
    size = len(members)
    if size == 0 or u < size:
        return False
    adjacency = _inside_neighbors(edges, members)
    root = n
    for root_child in members:
        parent_choices = [
            adjacency[j] for j in members if j != root_child
        ]
        others = [j for j in members if j != root_child]
        if any(not choices for choices in parent_choices):
            continue
        for parents in product(*parent_choices):
            assignment = dict(zip(others, parents))
            assignment[root_child] = root
            if any(
                assignment.get(parent) == child
                for child, parent in assignment.items()
                if parent != root
            ):
                continue
            arcs = []
            for child, parent in assignment.items():
                bound = u if parent == root else u - 1
                arcs.append((parent, child, 1, bound))
            supply = [0] * (n + 1)
            supply[root] = size
            for j in members:
                supply[j] -= 1
            if feasible_flow(n + 1, arcs, supply):
                return True
    return False


def cflow_satisfiable(
    n: int,
    edges: tuple[tuple[int, int], ...],
    members: tuple[int, ...],
    k: int,
) -> bool:
    """Can the source-flow rows be satisfied with this exact selection?

    With the selection fixed, the only binary choice left is which member
    is the source; flows run on both directions of the selected edges with
    capacity k, the source must emit k - 1 net units, and every other
    member must absorb one. All source choices are enumerated.
    """
    if len(members) != k or k < 2:
        return False
    adjacency = _inside_neighbors(edges, members)
    arcs = []
    for i in members:
        for j in adjacency[i]:
            arcs.append((i, j, 0, k))
    for chosen_source in members:
        supply = [0] * n
        for j in members:
            supply[j] = k - 1 if j == chosen_source else -1
        if feasible_flow(n, arcs, supply):
            return True
    return False
