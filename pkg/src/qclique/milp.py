"""Solver-agnostic MILP container with exact rational arithmetic.

Models hold variables (binary or bounded continuous), sparse linear rows, and
a maximization objective. All numbers are Fractions; evaluate() is the
ground-truth feasibility check used throughout the test suite, so it applies
zero tolerance unless the caller passes one explicitly (only done when judging
float assignments returned by external solvers).

Floats are rejected at the model boundary: a coefficient like 0.29 is not the
rational 29/100, and silently converting would move binding thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping


class ModelError(ValueError):
    """Raised for invalid model construction or evaluation inputs."""


Number = Rational  # ints and Fractions; floats are refused


def _rational(value, what: str) -> Fraction:
    if isinstance(value, float):
        raise ModelError(
            f"{what} is a float ({value!r}); pass a Fraction or int for exactness"
        )
    if not isinstance(value, Rational):
        raise ModelError(f"{what} must be rational, got {type(value).__name__}")
    return Fraction(value)


BINARY = "binary"
CONTINUOUS = "continuous"


@dataclass(frozen=True)
class Variable:
    """A model variable. None bounds mean unbounded on that side."""

    name: str
    kind: str
    lower: Fraction | None
    upper: Fraction | None


@dataclass(frozen=True)
class LinearConstraint:
    """A sparse row: terms (name -> coefficient), sense, rhs, and a tag.

    The tag names the row's origin (which constraint family, which graph
    entity) and doubles as the exported row name.
    """

    terms: Mapping[str, Fraction]
    sense: str
    rhs: Fraction
    tag: str


@dataclass(frozen=True)
class Evaluation:
    objective: Fraction
    feasible: bool
    integral: bool
    violations: tuple[tuple[str, Fraction], ...]


SENSES = ("<=", ">=", "=")


class LinearModel:
    """Mutable while building; freeze() makes it immutable and shareable."""

    def __init__(self, metadata: Mapping[str, str] | None = None) -> None:
        self.variables: list[Variable] = []
        self.constraints: list[LinearConstraint] = []
        self.objective: dict[str, Fraction] = {}
        self.metadata: dict[str, str] = dict(metadata or {})
        self._index: dict[str, int] = {}
        self._tags: set[str] = set()
        self._frozen = False

    def freeze(self) -> "LinearModel":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def _guard(self) -> None:
        if self._frozen:
            raise ModelError("model is frozen")

    def add_variable(
        self,
        name: str,
        kind: str = CONTINUOUS,
        lower: Number | None = None,
        upper: Number | None = None,
    ) -> int:
        """Register a variable and return its stable handle (insertion index).

        Binary variables default to bounds [0, 1] and any explicit bounds must
        stay within them.
        """
        self._guard()
        if not name or any(ch.isspace() for ch in name):
            raise ModelError(f"invalid variable name {name!r}")
        if name in self._index:
            raise ModelError(f"duplicate variable name {name!r}")
        if kind not in (BINARY, CONTINUOUS):
            raise ModelError(f"unknown variable kind {kind!r}")
        lo = None if lower is None else _rational(lower, f"lower bound of {name}")
        up = None if upper is None else _rational(upper, f"upper bound of {name}")
        if kind == BINARY:
            lo = Fraction(0) if lo is None else lo
            up = Fraction(1) if up is None else up
            if not (0 <= lo <= up <= 1):
                raise ModelError(f"binary {name} bounds [{lo}, {up}] outside [0, 1]")
        elif lo is not None and up is not None and lo > up:
            raise ModelError(f"{name} bounds cross: {lo} > {up}")
        handle = len(self.variables)
        self.variables.append(Variable(name, kind, lo, up))
        self._index[name] = handle
        return handle

    def variable(self, name: str) -> Variable:
        try:
            return self.variables[self._index[name]]
        except KeyError:
            raise ModelError(f"unknown variable {name!r}") from None

    def has_variable(self, name: str) -> bool:
        return name in self._index

    def handle(self, name: str) -> int:
        if name not in self._index:
            raise ModelError(f"unknown variable {name!r}")
        return self._index[name]

    def _check_terms(self, terms: Mapping[str, Number]) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for name, coef in terms.items():
            if name not in self._index:
                raise ModelError(f"unknown variable {name!r} in terms")
            value = _rational(coef, f"coefficient of {name}")
            if value != 0:
                out[name] = value
        return out

    def add_constraint(
        self,
        terms: Mapping[str, Number],
        sense: str,
        rhs: Number,
        tag: str,
    ) -> int:
        """Append a row; zero coefficients are dropped. Returns the row index."""
        self._guard()
        if sense not in SENSES:
            raise ModelError(f"unknown sense {sense!r}")
        if not tag or any(ch.isspace() for ch in tag):
            raise ModelError(f"invalid constraint tag {tag!r}")
        if tag in self._tags:
            raise ModelError(f"duplicate constraint tag {tag!r}")
        row = LinearConstraint(
            self._check_terms(terms), sense, _rational(rhs, f"rhs of {tag}"), tag
        )
        self.constraints.append(row)
        self._tags.add(tag)
        return len(self.constraints) - 1

    def has_tag(self, tag: str) -> bool:
        return tag in self._tags

    def set_objective(self, terms: Mapping[str, Number]) -> None:
        """Set the maximization objective (the only supported sense)."""
        self._guard()
        self.objective = self._check_terms(terms)

    def evaluate(
        self, assignment: Mapping[str, Number], tol: Number = 0
    ) -> Evaluation:
        """Exact feasibility/objective report for a full assignment.

        Checks every row, every variable bound, and binary integrality with
        rational arithmetic. tol loosens row and bound checks symmetrically
        (used only for float assignments from external solvers); the default 0
        is the oracle mode. Extra assignment keys are ignored; missing ones
        are an error.
        """
        tol_q = _rational(tol, "tolerance")
        if tol_q < 0:
            raise ModelError(f"negative tolerance {tol_q}")
        values: dict[str, Fraction] = {}
        missing = []
        for var in self.variables:
            if var.name not in assignment:
                missing.append(var.name)
            elif len(missing) == 0:
                values[var.name] = _rational(
                    assignment[var.name], f"value of {var.name}"
                )
        if missing:
            shown = ", ".join(missing[:5])
            raise ModelError(f"assignment missing {len(missing)} variables: {shown}")
        violations: list[tuple[str, Fraction]] = []
        for var in self.variables:
            v = values[var.name]
            if var.lower is not None and v < var.lower - tol_q:
                violations.append((f"bound:{var.name}", var.lower - v))
            if var.upper is not None and v > var.upper + tol_q:
                violations.append((f"bound:{var.name}", v - var.upper))
        for row in self.constraints:
            lhs = sum((coef * values[name] for name, coef in row.terms.items()),
                      Fraction(0))
            if row.sense == "<=":
                excess = lhs - row.rhs
            elif row.sense == ">=":
                excess = row.rhs - lhs
            else:
                excess = abs(lhs - row.rhs)
            if excess > tol_q:
                violations.append((row.tag, excess))
        integral = all(
            min(abs(values[var.name]), abs(values[var.name] - 1)) <= tol_q
            for var in self.variables
            if var.kind == BINARY
        )
        objective = sum(
            (coef * values[name] for name, coef in self.objective.items()),
            Fraction(0),
        )
        return Evaluation(
            objective=objective,
            feasible=not violations,
            integral=integral,
            violations=tuple(violations),
        )

    def binary_names(self) -> list[str]:
        return [v.name for v in self.variables if v.kind == BINARY]
