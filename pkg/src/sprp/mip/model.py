"""Solver-agnostic integer linear programs with exact rational data."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

BINARY = "binary"
INTEGER = "integer"

LE, GE, EQ = "<=", ">=", "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
NODE_LIMIT = "bound-limit"
TIME_LIMIT = "time-limit"


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    lower: int
    upper: int


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[int, Fraction], ...]
    sense: str
    rhs: Fraction

    def activity(self, values: Sequence[int]) -> Fraction:
        return sum((c * values[v] for v, c in self.terms), Fraction(0))

    def satisfied(self, lhs) -> bool:
        if self.sense == LE:
            return lhs <= self.rhs
        if self.sense == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


def _merge_terms(terms) -> tuple[tuple[int, Fraction], ...]:
    acc: dict[int, Fraction] = {}
    for v, c in terms:
        acc[v] = acc.get(v, Fraction(0)) + Fraction(c)
    return tuple((v, c) for v, c in acc.items() if c != 0)


class MipModel:
    """Minimization model. Terms are ``(var_id, coeff)`` pairs."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.variables: list[Variable] = []
        self.constraints: list[Constraint] = []
        self.objective: tuple[tuple[int, Fraction], ...] = ()
        self._index: dict[str, int] = {}

    def add_var(self, name: str, kind: str = BINARY, lower: int = 0, upper: int = 1) -> int:
        if name in self._index:
            raise ModelError(f"duplicate variable name {name!r}")
        if kind not in (BINARY, INTEGER):
            raise ModelError(f"unknown variable kind {kind!r}")
        if kind == BINARY and not (0 <= lower <= upper <= 1):
            raise ModelError(f"binary {name!r} needs bounds within [0, 1]")
        if lower > upper:
            raise ModelError(f"empty domain for {name!r}")
        self._index[name] = len(self.variables)
        self.variables.append(Variable(name, kind, int(lower), int(upper)))
        return len(self.variables) - 1

    def add_constraint(self, name: str, terms: Iterable, sense: str, rhs) -> Constraint:
        if sense not in (LE, GE, EQ):
            raise ModelError(f"unknown sense {sense!r}")
        terms = _merge_terms(terms)
        for v, _ in terms:
            if not 0 <= v < len(self.variables):
                raise ModelError(f"constraint {name!r} references undeclared variable {v}")
        con = Constraint(name, terms, sense, Fraction(rhs))
        self.constraints.append(con)
        return con

    def set_objective(self, terms: Iterable) -> None:
        self.objective = _merge_terms(terms)

    def var_id(self, name: str) -> int:
        return self._index[name]

    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    @property
    def num_vars(self) -> int:
        return len(self.variables)

    def objective_value(self, values: Sequence[int]) -> Fraction:
        return sum((c * values[v] for v, c in self.objective), Fraction(0))

    def objective_granularity(self) -> Fraction:
        """Objective values of integral points lie on multiples of this step."""
        den = 1
        for _, c in self.objective:
            den = lcm(den, c.denominator)
        return Fraction(1, den)

    def with_objective(self, terms, name: str | None = None) -> "MipModel":
        clone = MipModel(name or self.name)
        clone.variables = list(self.variables)
        clone.constraints = list(self.constraints)
        clone._index = dict(self._index)
        clone.set_objective(terms)
        return clone

    def __repr__(self):
        return (f"MipModel({self.name!r}, vars={len(self.variables)}, "
                f"constraints={len(self.constraints)})")


@dataclass
class MipSolution:
    values: list[int] | None
    objective: Fraction | None
    status: str
    nodes: int = 0
    seconds: float = 0.0
    bound: Fraction | float | None = None
    incumbents: list = field(default_factory=list)

    def by_name(self, model: MipModel) -> dict[str, int]:
        return {v.name: x for v, x in zip(model.variables, self.values)}


@dataclass
class Evaluation:
    feasible: bool
    violated: list[str]
    objective: Fraction
    out_of_bounds: list[str] = field(default_factory=list)


def assignment_vector(model: MipModel, assignment) -> list[int]:
    """Normalize a name-keyed mapping or a full vector into a list of ints."""
    if isinstance(assignment, Mapping):
        unknown = set(assignment) - set(model._index)
        if unknown:
            raise ModelError(f"unknown variables {sorted(unknown)[:5]}")
        missing = [v.name for v in model.variables if v.name not in assignment]
        if missing:
            raise ModelError(f"assignment misses variables {missing[:5]}")
        return [assignment[v.name] for v in model.variables]
    values = list(assignment)
    if len(values) != model.num_vars:
        raise ModelError(f"expected {model.num_vars} values, got {len(values)}")
    return values


def evaluate(model: MipModel, assignment) -> Evaluation:
    """Exact feasibility check of every bound and constraint."""
    values = assignment_vector(model, assignment)
    bad_bounds = []
    for var, x in zip(model.variables, values):
        if x != int(x) or not var.lower <= x <= var.upper:
            bad_bounds.append(var.name)
    violated = [con.name for con in model.constraints if not con.satisfied(con.activity(values))]
    return Evaluation(not violated and not bad_bounds, violated, model.objective_value(values),
                      bad_bounds)


def scaled_rows(model: MipModel):
    """Constraints with integer coefficients (each row scaled by its lcm)."""
    rows = []
    for con in model.constraints:
        den = con.rhs.denominator
        for _, c in con.terms:
            den = lcm(den, c.denominator)
        rows.append(([(v, int(c * den)) for v, c in con.terms], con.sense, int(con.rhs * den)))
    return rows


def fix_variables(model: MipModel, fixed: Mapping[int, int]) -> MipModel:
    """Copy of ``model`` with the given variables fixed through their bounds."""
    clone = MipModel(model.name)
    for vid, var in enumerate(model.variables):
        if vid in fixed:
            value = int(fixed[vid])
            if not var.lower <= value <= var.upper:
                raise ModelError(f"{var.name} = {value} outside its bounds")
            clone.add_var(var.name, var.kind, value, value)
        else:
            clone.add_var(var.name, var.kind, var.lower, var.upper)
    clone.constraints = list(model.constraints)
    clone.objective = model.objective
    return clone
