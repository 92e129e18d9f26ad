"""MILP builders for dense-subgraph search, plus connectivity row families.

Two base models:

- build_m1: pick exactly k vertices, maximize the number of induced edges
  (the fixed-cardinality model; its optimum answers the densest-k-subgraph
  question).
- build_f3: maximize the number of picked vertices subject to an exact
  density threshold gamma, with size indicators z_t for each admissible
  cardinality t (the quasi-clique model).

Four add-on families force the selected set to be connected:

- add_mpr: a source indicator plus signed flows on undirected edges; flow
  balance pins the source's net outflow to (size - 1) and every other
  selected vertex's to -1.
- add_cstree: an in-tree rooted at an artificial vertex; arc-use binaries
  form a spanning arborescence of the selection and flows count the vertices
  they feed.
- add_cflow: a source indicator plus nonnegative flows on bi-directed arcs,
  sized for the fixed-cardinality model only.
- lazy_cuts: separation rows generated from a disconnected candidate, stating
  that each of its fragments must recruit one of its outside neighbors.

build_certificate constructs an explicit witness assignment for the tree and
flow families on a given connected vertex set, so connectivity claims can be
re-verified through LinearModel.evaluate alone.

Constraint tags follow the fixed scheme "Eq<family>:<entity>" (for example
"Eq1b:e=0_2"), which downstream tooling relies on for cut deduplication and
reporting; the tag alphabet is chosen to survive LP/MPS name sanitization.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping

from .graphs import (
    Graph,
    check_vertex_set,
    components,
    boundary_neighbors,
    is_connected,
    oriented_arcs,
)
from .milp import (
    BINARY,
    CONTINUOUS,
    LinearConstraint,
    LinearModel,
    ModelError,
    _rational,
)


class FormulationError(ValueError):
    """Raised for invalid problem parameters or mismatched builder inputs."""


def _rational_param(value, what: str) -> Fraction:
    try:
        return _rational(value, what)
    except ModelError as exc:
        raise FormulationError(str(exc)) from None


class Problem(str, Enum):
    """Base objective family."""

    MQC = "mqc"  # maximize size at a density threshold
    DKS = "dks"  # maximize edges at a fixed size

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


class Connectivity(str, Enum):
    """How connectedness of the selected set is enforced (NONE: not at all)."""

    NONE = "none"
    MPR = "mpr"
    CSTREE = "cstree"
    CFLOW = "cflow"
    LAZY = "lazy"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class ProblemSpec:
    """A fully validated problem statement.

    MQC carries an exact rational gamma in (0, 1] and optional size bounds
    (used by the threshold model); DKS carries an integer k >= 2. Any mode
    other than NONE asks for the connected variant of the base problem.
    """

    problem: Problem
    gamma: Fraction | None = None
    k: int | None = None
    mode: Connectivity = Connectivity.NONE
    bounds: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.problem, Problem):
            raise FormulationError(f"unknown problem {self.problem!r}")
        if not isinstance(self.mode, Connectivity):
            raise FormulationError(f"unknown connectivity mode {self.mode!r}")
        if self.problem is Problem.MQC:
            if self.gamma is None:
                raise FormulationError("mqc requires gamma")
            gamma = _rational_param(self.gamma, "gamma")
            if not 0 < gamma <= 1:
                raise FormulationError(f"gamma {gamma} outside (0, 1]")
            object.__setattr__(self, "gamma", gamma)
            if self.k is not None:
                raise FormulationError("mqc takes gamma, not k")
            if self.mode in (Connectivity.CFLOW, Connectivity.LAZY):
                raise FormulationError(
                    f"mode {self.mode.value} applies to fixed-cardinality "
                    "problems only"
                )
        else:
            if self.k is None:
                raise FormulationError("dks requires k")
            if isinstance(self.k, bool) or not isinstance(self.k, int):
                raise FormulationError(f"k must be an integer, got {self.k!r}")
            if self.k < 2:
                raise FormulationError(f"k must be at least 2, got {self.k}")
            if self.gamma is not None:
                raise FormulationError("dks takes k, not gamma")
            if self.mode is Connectivity.MPR:
                raise FormulationError(
                    "mode mpr applies to density-threshold problems only"
                )
        if self.bounds is not None:
            if self.problem is not Problem.MQC:
                raise FormulationError("size bounds apply to mqc only")
            lo, hi = self.bounds
            if not (isinstance(lo, int) and isinstance(hi, int)):
                raise FormulationError(f"bounds must be integers, got {self.bounds!r}")
            if not 1 <= lo <= hi:
                raise FormulationError(f"bounds ({lo}, {hi}) must satisfy 1 <= lo <= hi")

    @classmethod
    def mqc(
        cls,
        gamma,
        mode: Connectivity = Connectivity.NONE,
        bounds: tuple[int, int] | None = None,
    ) -> "ProblemSpec":
        return cls(Problem.MQC, gamma=gamma, mode=mode, bounds=bounds)

    @classmethod
    def dks(cls, k: int, mode: Connectivity = Connectivity.NONE) -> "ProblemSpec":
        return cls(Problem.DKS, k=k, mode=mode)

    @property
    def connected(self) -> bool:
        return self.mode is not Connectivity.NONE

    def label(self) -> str:
        """Problem family name: mqc / mcqc / dks / dcks."""
        if self.problem is Problem.MQC:
            return "mcqc" if self.connected else "mqc"
        return "dcks" if self.connected else "dks"

    def validate_for(self, g: Graph) -> None:
        """Check the graph-dependent parts (sizes against n)."""
        if self.problem is Problem.DKS and self.k > g.n:
            raise FormulationError(f"k={self.k} exceeds vertex count {g.n}")
        if self.bounds is not None and self.bounds[1] > g.n:
            raise FormulationError(
                f"upper size bound {self.bounds[1]} exceeds vertex count {g.n}"
            )


@dataclass(frozen=True)
class VariableLayout:
    """Maps graph entities to the variable names of one built model.

    x is indexed by vertex, y by edge (i, j) with i < j, z (threshold model
    only) by admissible cardinality. The connectivity fields are filled by
    the add_* builders: source holds the per-vertex source/anchor indicator
    names, edge_flow the signed per-edge flows (oriented by i < j), arc_use
    and arc_flow the per-arc binaries and nonnegative flows (arc keys may use
    the artificial root id, which is the vertex count).
    """

    graph_fingerprint: str
    kind: str  # "m1" | "f3"
    k: int | None
    gamma: Fraction | None
    bounds: tuple[int, int] | None
    x: tuple[str, ...]
    y: Mapping[tuple[int, int], str]
    z: Mapping[int, str] | None
    connectivity: Connectivity = Connectivity.NONE
    source: Mapping[int, str] | None = None
    edge_flow: Mapping[tuple[int, int], str] | None = None
    arc_use: Mapping[tuple[int, int], str] | None = None
    arc_flow: Mapping[tuple[int, int], str] | None = None


@dataclass(frozen=True)
class Certificate:
    """Witness assignment for the connectivity variables of one mode.

    Merging `assignment` with the base indicator assignment of the certified
    vertex set yields a point that evaluate() accepts on the full model.
    """

    mode: Connectivity
    source: int
    assignment: Mapping[str, Fraction]


DISCONNECTED = "disconnected"


def _edge_upper_bound(count: int) -> Fraction:
    """Number of vertex pairs among `count` vertices."""
    return Fraction(count * (count - 1), 2)


def build_m1(g: Graph, k: int) -> tuple[LinearModel, VariableLayout]:
    """Fixed-cardinality model: pick exactly k vertices, maximize edges.

    Variables: one binary x_i per vertex, one continuous y_ij in [0, 1] per
    edge (linearized pair indicator, capped by both endpoints). Rows: one
    cardinality row plus two cap rows per edge. The selection can never be
    empty (k >= 2), which the connectivity add-ons rely on.
    """
    if isinstance(k, bool) or not isinstance(k, int):
        raise FormulationError(f"k must be an integer, got {k!r}")
    if not 2 <= k <= g.n:
        raise FormulationError(f"k={k} outside [2, {g.n}]")
    model = LinearModel(
        {"formulation": "m1", "k": str(k), "graph": g.fingerprint()}
    )
    x = tuple(f"x_{i}" for i in range(g.n))
    for name in x:
        model.add_variable(name, BINARY)
    y: dict[tuple[int, int], str] = {}
    for i, j in g.edges:
        name = f"y_{i}_{j}"
        y[(i, j)] = name
        model.add_variable(name, CONTINUOUS, 0, 1)
    model.set_objective({name: 1 for name in y.values()})
    model.add_constraint({name: 1 for name in x}, "=", k, "Eq1a")
    for i, j in g.edges:
        model.add_constraint(
            {y[(i, j)]: 1, x[i]: -1}, "<=", 0, f"Eq1b:e={i}_{j}"
        )
        model.add_constraint(
            {y[(i, j)]: 1, x[j]: -1}, "<=", 0, f"Eq1c:e={i}_{j}"
        )
    layout = VariableLayout(
        graph_fingerprint=g.fingerprint(),
        kind="m1",
        k=k,
        gamma=None,
        bounds=None,
        x=x,
        y=y,
        z=None,
    )
    return model, layout


def build_f3(
    g: Graph, gamma, lower: int, upper: int
) -> tuple[LinearModel, VariableLayout]:
    """Density-threshold model: maximize size at exact density >= gamma.

    Variables: binary x_i per vertex, continuous y_ij in [0, 1] per edge, and
    one continuous size indicator z_t in [0, 1] per admissible cardinality
    t in [lower, upper] (integrality of z is implied at optima, so the
    indicators stay continuous). Rows: the density row compares the selected
    edge count against gamma times the pair count of the selected size, the
    size row ties x to z, the choice row makes z a convex choice, and two cap
    rows per edge bound y by its endpoints. gamma enters the density row as
    an exact rational coefficient: at binding thresholds, rounding would
    change the feasible set.
    """
    gamma = _rational_param(gamma, "gamma")
    if not 0 < gamma <= 1:
        raise FormulationError(f"gamma {gamma} outside (0, 1]")
    for name, value in (("lower", lower), ("upper", upper)):
        if isinstance(value, bool) or not isinstance(value, int):
            raise FormulationError(f"{name} bound must be an integer, got {value!r}")
    if not 1 <= lower <= upper <= g.n:
        raise FormulationError(
            f"bounds ({lower}, {upper}) outside 1 <= lower <= upper <= {g.n}"
        )
    model = LinearModel(
        {
            "formulation": "f3",
            "gamma": str(gamma),
            "bounds": f"{lower}_{upper}",
            "graph": g.fingerprint(),
        }
    )
    x = tuple(f"x_{i}" for i in range(g.n))
    for name in x:
        model.add_variable(name, BINARY)
    y: dict[tuple[int, int], str] = {}
    for i, j in g.edges:
        name = f"y_{i}_{j}"
        y[(i, j)] = name
        model.add_variable(name, CONTINUOUS, 0, 1)
    z: dict[int, str] = {}
    for t in range(lower, upper + 1):
        name = f"z_{t}"
        z[t] = name
        model.add_variable(name, CONTINUOUS, 0, 1)
    model.set_objective({name: 1 for name in x})
    density_terms: dict[str, Fraction] = {name: Fraction(1) for name in y.values()}
    for t, name in z.items():
        density_terms[name] = -gamma * _edge_upper_bound(t)
    model.add_constraint(density_terms, ">=", 0, "Eq2a")
    size_terms: dict[str, Fraction] = {name: Fraction(1) for name in x}
    for t, name in z.items():
        size_terms[name] = Fraction(-t)
    model.add_constraint(size_terms, "=", 0, "Eq2b")
    model.add_constraint({name: 1 for name in z.values()}, "=", 1, "Eq2c")
    for i, j in g.edges:
        model.add_constraint(
            {y[(i, j)]: 1, x[i]: -1}, "<=", 0, f"Eq2d:e={i}_{j}"
        )
        model.add_constraint(
            {y[(i, j)]: 1, x[j]: -1}, "<=", 0, f"Eq2e:e={i}_{j}"
        )
    layout = VariableLayout(
        graph_fingerprint=g.fingerprint(),
        kind="f3",
        k=None,
        gamma=gamma,
        bounds=(lower, upper),
        x=x,
        y=y,
        z=z,
    )
    return model, layout


def default_bounds(g: Graph, gamma) -> tuple[int, int]:
    """Default size bounds for the threshold model: (1, n).

    No tightening from gamma or degrees is attempted; the parameter is kept
    so callers need not special-case a future bound rule.
    """
    del gamma
    return (1, g.n)


def _require_base(
    model: LinearModel,
    layout: VariableLayout,
    g: Graph,
    kinds: tuple[str, ...],
    op: str,
) -> None:
    if model.frozen:
        raise FormulationError(f"{op}: model is frozen")
    if layout.connectivity is not Connectivity.NONE:
        raise FormulationError(
            f"{op}: model already carries {layout.connectivity.value} rows"
        )
    if layout.kind not in kinds:
        raise FormulationError(
            f"{op} requires a {' or '.join(kinds)} model, got {layout.kind}"
        )
    if layout.graph_fingerprint != g.fingerprint():
        raise FormulationError(f"{op}: model was built over a different graph")


def add_mpr(
    model: LinearModel, layout: VariableLayout, g: Graph, u: int
) -> tuple[LinearModel, VariableLayout]:
    """Add source-plus-signed-flow connectivity rows to a threshold model.

    One binary c_i marks the source; one free continuous flow per edge,
    oriented from the smaller to the larger endpoint, may run negative. The
    balance rows force the source's net outflow to (selected size - 1) and
    every other selected vertex's to -1, with u as the deactivation constant;
    the per-edge bound rows cap |flow| by (u - 1) times the edge indicator.
    u must equal the model's upper size bound: anything larger weakens the
    rows, anything smaller cuts off feasible selections.
    """
    _require_base(model, layout, g, ("f3",), "add_mpr")
    if u != layout.bounds[1]:
        raise FormulationError(
            f"add_mpr: u={u} differs from the model's upper size bound "
            f"{layout.bounds[1]}"
        )
    x = layout.x
    source: dict[int, str] = {}
    for i in range(g.n):
        name = f"c_{i}"
        source[i] = name
        model.add_variable(name, BINARY)
    edge_flow: dict[tuple[int, int], str] = {}
    for i, j in g.edges:
        name = f"fe_{i}_{j}"
        edge_flow[(i, j)] = name
        model.add_variable(name, CONTINUOUS, None, None)
    model.add_constraint({name: 1 for name in source.values()}, "=", 1, "Eq3a")
    for i in range(g.n):
        model.add_constraint(
            {source[i]: 1, x[i]: -1}, "<=", 0, f"Eq3b:i={i}"
        )
    uq = Fraction(u)
    for i in range(g.n):
        net: dict[str, Fraction] = {}
        for j in g.neighbors[i]:
            if i < j:
                net[edge_flow[(i, j)]] = Fraction(1)
            else:
                net[edge_flow[(j, i)]] = Fraction(-1)
        all_x = {name: Fraction(-1) for name in x}
        lower_src = dict(net)
        for name, coef in all_x.items():
            lower_src[name] = lower_src.get(name, Fraction(0)) + coef
        lower_src[source[i]] = lower_src.get(source[i], Fraction(0)) - uq
        model.add_constraint(lower_src, ">=", -1 - uq, f"Eq3c:i={i}")
        upper_src = dict(net)
        for name, coef in all_x.items():
            upper_src[name] = upper_src.get(name, Fraction(0)) + coef
        upper_src[source[i]] = upper_src.get(source[i], Fraction(0)) + uq
        model.add_constraint(upper_src, "<=", uq - 1, f"Eq3d:i={i}")
        lower_other = dict(net)
        lower_other[source[i]] = lower_other.get(source[i], Fraction(0)) + uq
        lower_other[x[i]] = lower_other.get(x[i], Fraction(0)) - uq
        model.add_constraint(lower_other, ">=", -1 - uq, f"Eq3e:i={i}")
        upper_other = dict(net)
        upper_other[source[i]] = upper_other.get(source[i], Fraction(0)) - uq
        upper_other[x[i]] = upper_other.get(x[i], Fraction(0)) + uq
        model.add_constraint(upper_other, "<=", uq - 1, f"Eq3f:i={i}")
    cap = uq - 1
    for i, j in g.edges:
        flow = edge_flow[(i, j)]
        model.add_constraint(
            {flow: 1, layout.y[(i, j)]: cap}, ">=", 0, f"Eq3g:e={i}_{j}"
        )
        model.add_constraint(
            {flow: 1, layout.y[(i, j)]: -cap}, "<=", 0, f"Eq3h:e={i}_{j}"
        )
    new_layout = replace(
        layout,
        connectivity=Connectivity.MPR,
        source=source,
        edge_flow=edge_flow,
    )
    return model, new_layout


def _arc_name(prefix: str, arc: tuple[int, int], root: int | None) -> str:
    a, b = arc
    left = "r" if root is not None and a == root else str(a)
    return f"{prefix}_{left}_{b}"


def _arc_tag(arc: tuple[int, int], root: int | None) -> str:
    a, b = arc
    left = "r" if root is not None and a == root else str(a)
    return f"{left}_{b}"


def add_cstree(
    model: LinearModel, layout: VariableLayout, g: Graph, u: int
) -> tuple[LinearModel, VariableLayout]:
    """Add rooted in-tree connectivity rows (works on both base models).

    An artificial root (id n, rendered "r" in names) gets one arc to every
    vertex; every edge contributes both directions. Binary arc-use variables
    form an in-tree covering exactly the selected vertices: each selected
    vertex has one incoming used arc, the root uses exactly one arc, and per
    edge at most one direction is used and only if the edge is selected.
    Nonnegative arc flows carry (subtree size) units, bounded per arc by
    (u - 1) times its use variable (u for root arcs), with unit lower bounds
    tying flow to use; the root ships exactly the selected size. An empty
    selection is infeasible under these rows, which both base models already
    rule out. For the fixed-cardinality model u must equal k; for the
    threshold model u must equal the upper size bound.
    """
    _require_base(model, layout, g, ("m1", "f3"), "add_cstree")
    bound = layout.k if layout.kind == "m1" else layout.bounds[1]
    if u != bound:
        raise FormulationError(
            f"add_cstree: u={u} differs from the model's size bound {bound}"
        )
    rooted = oriented_arcs(g, rooted=True)
    root = rooted.root
    x = layout.x
    arc_use: dict[tuple[int, int], str] = {}
    arc_flow: dict[tuple[int, int], str] = {}
    for arc in rooted.arcs:
        name = _arc_name("v", arc, root)
        arc_use[arc] = name
        model.add_variable(name, BINARY)
    for arc in rooted.arcs:
        name = _arc_name("fa", arc, root)
        arc_flow[arc] = name
        model.add_variable(name, CONTINUOUS, 0, None)
    uq = Fraction(u)
    for j in range(g.n):
        in_arcs = [(i, j) for i in g.neighbors[j]] + [(root, j)]
        model.add_constraint(
            {arc_use[arc]: 1 for arc in in_arcs} | {x[j]: -1},
            "=",
            0,
            f"Eq5a:j={j}",
        )
    model.add_constraint(
        {arc_use[(root, j)]: 1 for j in range(g.n)}, "=", 1, "Eq5b"
    )
    for j in range(g.n):
        balance: dict[str, Fraction] = {}
        for i in g.neighbors[j]:
            balance[arc_flow[(i, j)]] = Fraction(1)
        balance[arc_flow[(root, j)]] = Fraction(1)
        for i in g.neighbors[j]:
            balance[arc_flow[(j, i)]] = Fraction(-1)
        balance[x[j]] = Fraction(-1)
        model.add_constraint(balance, "=", 0, f"Eq5c:j={j}")
    for arc in rooted.arcs:
        tag = _arc_tag(arc, root)
        model.add_constraint(
            {arc_flow[arc]: 1, arc_use[arc]: -1}, ">=", 0, f"Eq5d:a={tag}"
        )
    for arc in rooted.arcs:
        if arc[0] == root:
            continue
        tag = _arc_tag(arc, root)
        model.add_constraint(
            {arc_flow[arc]: 1, arc_use[arc]: -(uq - 1)},
            "<=",
            0,
            f"Eq5e:a={tag}",
        )
    for j in range(g.n):
        arc = (root, j)
        model.add_constraint(
            {arc_flow[arc]: 1, arc_use[arc]: -uq}, "<=", 0, f"Eq5f:j={j}"
        )
    root_terms: dict[str, Fraction] = {
        arc_flow[(root, j)]: Fraction(1) for j in range(g.n)
    }
    for name in x:
        root_terms[name] = Fraction(-1)
    model.add_constraint(root_terms, "=", 0, "Eq5g")
    for i, j in g.edges:
        model.add_constraint(
            {
                arc_use[(i, j)]: 1,
                arc_use[(j, i)]: 1,
                layout.y[(i, j)]: -1,
            },
            "<=",
            0,
            f"Eq5h:e={i}_{j}",
        )
    new_layout = replace(
        layout,
        connectivity=Connectivity.CSTREE,
        arc_use=arc_use,
        arc_flow=arc_flow,
    )
    return model, new_layout


def add_cflow(
    model: LinearModel, layout: VariableLayout, g: Graph, k: int
) -> tuple[LinearModel, VariableLayout]:
    """Add source-plus-flow connectivity rows to a fixed-cardinality model.

    One binary s_i marks the source (which must be selected); one nonnegative
    flow per arc direction, capped by k times the edge indicator. Balance
    rows make the source emit k - 1 net units and every other selected vertex
    absorb one, so all k selected vertices must be reachable from the source.
    k must match the model's cardinality; an empty selection is infeasible
    under these rows, which the base model already rules out.
    """
    _require_base(model, layout, g, ("m1",), "add_cflow")
    if k != layout.k:
        raise FormulationError(
            f"add_cflow: k={k} differs from the model's cardinality {layout.k}"
        )
    x = layout.x
    source: dict[int, str] = {}
    for i in range(g.n):
        name = f"s_{i}"
        source[i] = name
        model.add_variable(name, BINARY)
    arcs = oriented_arcs(g, rooted=False)
    arc_flow: dict[tuple[int, int], str] = {}
    for arc in arcs.arcs:
        name = _arc_name("fd", arc, None)
        arc_flow[arc] = name
        model.add_variable(name, CONTINUOUS, 0, None)
    model.add_constraint({name: 1 for name in source.values()}, "=", 1, "Eq6a")
    for i in range(g.n):
        model.add_constraint(
            {source[i]: 1, x[i]: -1}, "<=", 0, f"Eq6b:i={i}"
        )
    kq = Fraction(k)
    for i, j in g.edges:
        model.add_constraint(
            {arc_flow[(i, j)]: 1, layout.y[(i, j)]: -kq},
            "<=",
            0,
            f"Eq6c:e={i}_{j}",
        )
        model.add_constraint(
            {arc_flow[(j, i)]: 1, layout.y[(i, j)]: -kq},
            "<=",
            0,
            f"Eq6d:e={i}_{j}",
        )
    for i in range(g.n):
        balance: dict[str, Fraction] = {}
        for j in g.neighbors[i]:
            balance[arc_flow[(j, i)]] = Fraction(1)
            balance[arc_flow[(i, j)]] = Fraction(-1)
        balance[x[i]] = Fraction(-1)
        balance[source[i]] = kq
        model.add_constraint(balance, "=", 0, f"Eq6e:i={i}")
    new_layout = replace(
        layout,
        connectivity=Connectivity.CFLOW,
        source=source,
        arc_flow=arc_flow,
    )
    return model, new_layout


def lazy_cuts(g: Graph, s: Iterable[int], k: int) -> list[LinearConstraint]:
    """Separation rows for a disconnected candidate selection.

    For each connected fragment C of the selection with |C| < k, and each
    vertex j in C, emit: sum of x over C's outside neighbors >= x_j. Any
    connected set of size k that keeps j must then also recruit a neighbor
    of C. Fragments of size >= k are skipped: a connected k-set could lie
    entirely inside one, and a cut built from it would wrongly exclude that
    set. When the candidate has exactly k vertices (the only case the solve
    loop produces), every fragment of a disconnected candidate is smaller
    than k, so nothing is skipped. Returns [] iff the selection is connected.
    """
    members = check_vertex_set(g, s)
    if isinstance(k, bool) or not isinstance(k, int) or k < 2:
        raise FormulationError(f"k must be an integer >= 2, got {k!r}")
    parts = components(g, members)
    if len(parts) <= 1:
        return []
    cuts: list[LinearConstraint] = []
    for part in parts:
        if len(part) >= k:
            continue
        outside = boundary_neighbors(g, part)
        lhs = {f"x_{i}": Fraction(1) for i in outside}
        label = ".".join(str(v) for v in part)
        for j in part:
            terms = dict(lhs)
            terms[f"x_{j}"] = terms.get(f"x_{j}", Fraction(0)) - 1
            cuts.append(
                LinearConstraint(terms, ">=", Fraction(0), f"Eq4a:C={label}:j={j}")
            )
    return cuts


def _bfs_tree(g: Graph, members: tuple[int, ...]) -> tuple[int, dict[int, int]]:
    """Deterministic spanning tree of a connected selection.

    Returns (source, parent map); the source is the smallest member, children
    are discovered in ascending neighbor order.
    """
    inside = set(members)
    source = members[0]
    parent: dict[int, int] = {source: source}
    queue = [source]
    while queue:
        vertex = queue.pop(0)
        for nxt in g.neighbors[vertex]:
            if nxt in inside and nxt not in parent:
                parent[nxt] = vertex
                queue.append(nxt)
    return source, parent


def _subtree_sizes(parent: dict[int, int], source: int) -> dict[int, int]:
    sizes = {v: 1 for v in parent}
    order = sorted(parent, key=lambda v: -_depth(parent, source, v))
    for v in order:
        if v != source:
            sizes[parent[v]] += sizes[v]
    return sizes


def _depth(parent: dict[int, int], source: int, v: int) -> int:
    depth = 0
    while v != source:
        v = parent[v]
        depth += 1
    return depth


def build_certificate(
    g: Graph,
    s: Iterable[int],
    mode: Connectivity,
    *,
    u: int | None = None,
    k: int | None = None,
) -> Certificate | str:
    """Construct a connectivity witness, or report "disconnected".

    For a connected selection, builds a spanning tree from the smallest
    member and returns the full assignment fragment over the mode's
    connectivity variables (all of them, zeros included): tree arcs carry
    their subtree sizes, the root/source ships the selection size. CSTREE
    needs u >= |s| (pass the model's size bound); CFLOW needs k == |s|.
    """
    members = check_vertex_set(g, s)
    if not members:
        raise FormulationError("cannot certify an empty selection")
    if mode is Connectivity.CSTREE:
        if u is None:
            raise FormulationError("cstree certificate needs u")
        if u < len(members):
            raise FormulationError(
                f"u={u} smaller than the selection size {len(members)}"
            )
    elif mode is Connectivity.CFLOW:
        if k is None:
            raise FormulationError("cflow certificate needs k")
        if k != len(members):
            raise FormulationError(
                f"k={k} does not match the selection size {len(members)}"
            )
    else:
        raise FormulationError(f"no certificate form for mode {mode.value}")
    if not is_connected(g, members):
        return DISCONNECTED
    source, parent = _bfs_tree(g, members)
    sizes = _subtree_sizes(parent, source)
    assignment: dict[str, Fraction] = {}
    if mode is Connectivity.CSTREE:
        rooted = oriented_arcs(g, rooted=True)
        root = rooted.root
        for arc in rooted.arcs:
            assignment[_arc_name("v", arc, root)] = Fraction(0)
            assignment[_arc_name("fa", arc, root)] = Fraction(0)
        assignment[_arc_name("v", (root, source), root)] = Fraction(1)
        assignment[_arc_name("fa", (root, source), root)] = Fraction(len(members))
        for child, par in parent.items():
            if child == source:
                continue
            assignment[_arc_name("v", (par, child), root)] = Fraction(1)
            assignment[_arc_name("fa", (par, child), root)] = Fraction(sizes[child])
    else:
        arcs = oriented_arcs(g, rooted=False)
        for i in range(g.n):
            assignment[f"s_{i}"] = Fraction(1 if i == source else 0)
        for arc in arcs.arcs:
            assignment[_arc_name("fd", arc, None)] = Fraction(0)
        for child, par in parent.items():
            if child == source:
                continue
            assignment[_arc_name("fd", (par, child), None)] = Fraction(sizes[child])
    return Certificate(mode=mode, source=source, assignment=assignment)


def indicator_assignment(
    layout: VariableLayout, s: Iterable[int]
) -> dict[str, Fraction]:
    """Base-model assignment induced by a vertex set: x, y, and z if present.

    x is the 0/1 indicator, each y_ij is the product of its endpoints, and
    the size indicator matching |s| is set when the layout has one (the size
    must then lie within the layout's bounds).
    """
    chosen = set(s)
    values: dict[str, Fraction] = {}
    for i, name in enumerate(layout.x):
        values[name] = Fraction(1 if i in chosen else 0)
    for (i, j), name in layout.y.items():
        values[name] = Fraction(1 if i in chosen and j in chosen else 0)
    if layout.z is not None:
        size = len(chosen)
        if size not in layout.z and size != 0:
            raise FormulationError(
                f"selection size {size} outside the layout's bounds "
                f"{layout.bounds}"
            )
        for t, name in layout.z.items():
            values[name] = Fraction(1 if t == size else 0)
    return values
