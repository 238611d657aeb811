"""Containers for linear programs in `Ax >= b` style, plus validation and JSON IO.

A program holds bounded variables, named constraints with senses >=, <= or =,
and a minimised affine objective. Everything is immutable by convention once
built: the helpers below return new programs instead of mutating.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    DuplicateNameError,
    InvalidBoundError,
    MissingVariableError,
    UnknownVariableError,
)

GEQ = ">="
LEQ = "<="
EQ = "="
SENSES = (GEQ, LEQ, EQ)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class VariableId:
    """Dense index and unique name of one decision variable."""

    index: int
    name: str


@dataclass
class LinearExpr:
    """Affine expression ``sum(coef * var) + constant``.

    Zero coefficients are dropped on construction. Before a program is built,
    term keys may be plain variable names; `build_lp` resolves them to
    `VariableId` keys.
    """

    terms: dict
    constant: float = 0.0

    def __post_init__(self):
        self.terms = {k: float(v) for k, v in self.terms.items() if float(v) != 0.0}
        self.constant = float(self.constant)


@dataclass
class Constraint:
    """Single linear constraint ``expr <sense> rhs``."""

    expr: LinearExpr
    sense: str
    rhs: float
    name: str

    def __post_init__(self):
        if self.sense not in SENSES:
            raise InvalidBoundError(f"constraint {self.name!r}: unknown sense {self.sense!r}")
        self.rhs = float(self.rhs)
        if not math.isfinite(self.rhs):
            raise InvalidBoundError(f"constraint {self.name!r}: rhs must be finite")


@dataclass
class LinearProgram:
    """Minimisation program over bounded variables with named constraints."""

    variables: list[VariableId]
    lower: list[float]
    upper: list[float]
    constraints: list[Constraint]
    objective: LinearExpr
    _by_name: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._by_name = {v.name: v for v in self.variables}

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.constraints)

    def variable(self, name: str) -> VariableId:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {name!r}") from None

    def bounds(self, var: VariableId) -> tuple[float, float]:
        return self.lower[var.index], self.upper[var.index]

    def constraint(self, name: str) -> Constraint:
        for con in self.constraints:
            if con.name == name:
                return con
        raise KeyError(name)

    def with_constraints(self, extra: Iterable[Constraint]) -> LinearProgram:
        """New program with `extra` rows appended; variables are shared."""
        extra = [_resolve_constraint(c, self._by_name) for c in extra]
        names = {c.name for c in self.constraints}
        for con in extra:
            if con.name in names:
                raise DuplicateNameError(f"duplicate constraint name {con.name!r}")
            names.add(con.name)
        return LinearProgram(self.variables, self.lower, self.upper,
                             self.constraints + extra, self.objective)

    def without_constraint(self, name: str) -> LinearProgram:
        kept = [c for c in self.constraints if c.name != name]
        return LinearProgram(self.variables, self.lower, self.upper, kept, self.objective)

    def with_objective(self, objective: LinearExpr) -> LinearProgram:
        objective = _resolve_expr(objective, self._by_name)
        return LinearProgram(self.variables, self.lower, self.upper,
                             self.constraints, objective)


@dataclass
class Solution:
    """Solver outcome. Primal/dual maps are populated when status is optimal.

    `warm_start` is an opaque hint that lets later solves of programs sharing
    this program's rows/columns as a prefix skip phase 1; it is never
    serialised.
    """

    status: str
    primal: dict = field(default_factory=dict)
    objective_value: float = math.nan
    dual: dict = field(default_factory=dict)
    dual_objective: float = math.nan
    warm_start: tuple | None = field(default=None, repr=False, compare=False)

    def value(self, var) -> float:
        """Primal value by VariableId or by name."""
        if var in self.primal:
            return self.primal[var]
        if isinstance(var, str):
            for v, val in self.primal.items():
                if v.name == var:
                    return val
        raise MissingVariableError(f"solution has no value for {var!r}")

    def primal_by_name(self) -> dict[str, float]:
        return {v.name: val for v, val in self.primal.items()}


def _coerce_bound(value, default: float) -> float:
    if value is None:
        return default
    value = float(value)
    if math.isnan(value):
        raise InvalidBoundError("bound must not be NaN")
    return value


def _resolve_expr(expr: LinearExpr, by_name: Mapping[str, VariableId]) -> LinearExpr:
    """Normalise term keys to the program's own VariableId objects."""
    terms = {}
    for key, coef in expr.terms.items():
        name = key.name if isinstance(key, VariableId) else key
        var = by_name.get(name)
        if var is None or (isinstance(key, VariableId) and key != var):
            raise UnknownVariableError(f"unknown variable {name!r}")
        if var in terms:
            raise DuplicateNameError(f"variable {name!r} appears twice in one expression")
        terms[var] = coef
    return LinearExpr(terms, expr.constant)


def _resolve_constraint(con: Constraint, by_name: Mapping[str, VariableId]) -> Constraint:
    return Constraint(_resolve_expr(con.expr, by_name), con.sense, con.rhs, con.name)


def build_lp(variables: Iterable[tuple], constraints: Iterable[Constraint],
             objective: LinearExpr) -> LinearProgram:
    """Validate and assemble a program.

    `variables` is an iterable of ``(name, lower, upper)``; use None or
    +/-inf for open bounds. Constraint and objective terms may reference
    variables by name or by VariableId.
    """
    ids, lower, upper = [], [], []
    seen = set()
    for idx, (name, lo, up) in enumerate(variables):
        if name in seen:
            raise DuplicateNameError(f"duplicate variable name {name!r}")
        seen.add(name)
        lo = _coerce_bound(lo, -math.inf)
        up = _coerce_bound(up, math.inf)
        if lo > up:
            raise InvalidBoundError(f"variable {name!r}: lower bound {lo} exceeds upper {up}")
        ids.append(VariableId(idx, name))
        lower.append(lo)
        upper.append(up)
    if not ids:
        raise ValueError("a program needs at least one variable")

    by_name = {v.name: v for v in ids}
    resolved = []
    con_names = set()
    for con in constraints:
        if con.name in con_names:
            raise DuplicateNameError(f"duplicate constraint name {con.name!r}")
        con_names.add(con.name)
        resolved.append(_resolve_constraint(con, by_name))
    return LinearProgram(ids, lower, upper, resolved, _resolve_expr(objective, by_name))


def evaluate(expr: LinearExpr, point: Mapping) -> float:
    """Evaluate an expression at a point keyed by VariableId or variable name."""
    total = expr.constant
    for var, coef in expr.terms.items():
        if var in point:
            total += coef * point[var]
            continue
        name = var.name if isinstance(var, VariableId) else var
        if name in point:
            total += coef * point[name]
        else:
            raise MissingVariableError(f"point does not cover variable {name!r}")
    return total


def _negated(expr: LinearExpr) -> LinearExpr:
    return LinearExpr({v: -c for v, c in expr.terms.items()}, -expr.constant)


def to_geq_form(lp: LinearProgram) -> LinearProgram:
    """Rewrite every constraint as ``expr >= rhs``; idempotent.

    <= rows are negated in place under their own name; = rows split into a
    ``name#ge`` / ``name#le`` pair.
    """
    rows = []
    for con in lp.constraints:
        if con.sense == GEQ:
            rows.append(con)
        elif con.sense == LEQ:
            rows.append(Constraint(_negated(con.expr), GEQ, -con.rhs, con.name))
        else:
            rows.append(Constraint(con.expr, GEQ, con.rhs, con.name + "#ge"))
            rows.append(Constraint(_negated(con.expr), GEQ, -con.rhs, con.name + "#le"))
    names = set()
    for row in rows:
        if row.name in names:
            raise DuplicateNameError(f"name collision after normalisation: {row.name!r}")
        names.add(row.name)
    return LinearProgram(lp.variables, lp.lower, lp.upper, rows, lp.objective)


def normalize_point(lp: LinearProgram, point: Mapping) -> dict[VariableId, float]:
    """Point keyed by VariableId or name -> dict keyed by this program's ids."""
    out = {}
    for var in lp.variables:
        if var in point:
            out[var] = float(point[var])
        elif var.name in point:
            out[var] = float(point[var.name])
        else:
            raise MissingVariableError(f"point does not cover variable {var.name!r}")
    return out


def is_feasible(lp: LinearProgram, point: Mapping, tol: float = 1e-7) -> bool:
    """True iff `point` satisfies all bounds and constraints within `tol`."""
    vals = normalize_point(lp, point)
    for var in lp.variables:
        v = vals[var]
        if v < lp.lower[var.index] - tol or v > lp.upper[var.index] + tol:
            return False
    for con in to_geq_form(lp).constraints:
        if evaluate(con.expr, vals) < con.rhs - tol:
            return False
    return True


# --- JSON round trip ---

def _bound_to_json(value: float):
    return None if math.isinf(value) else value


def _terms_to_json(expr: LinearExpr) -> dict[str, float]:
    return {v.name: c for v, c in expr.terms.items()}


def lp_to_dict(lp: LinearProgram) -> dict:
    return {
        "variables": [
            {"name": v.name, "lower": _bound_to_json(lp.lower[v.index]),
             "upper": _bound_to_json(lp.upper[v.index])}
            for v in lp.variables
        ],
        "constraints": [
            {"name": c.name, "terms": _terms_to_json(c.expr), "sense": c.sense,
             "rhs": c.rhs, **({"constant": c.expr.constant} if c.expr.constant else {})}
            for c in lp.constraints
        ],
        "objective": {"terms": _terms_to_json(lp.objective), "constant": lp.objective.constant},
    }


def lp_from_dict(data: Mapping) -> LinearProgram:
    variables = [(v["name"], v.get("lower"), v.get("upper")) for v in data["variables"]]
    constraints = [
        Constraint(LinearExpr(dict(c["terms"]), c.get("constant", 0.0)),
                   c["sense"], c["rhs"], c["name"])
        for c in data["constraints"]
    ]
    obj = data["objective"]
    return build_lp(variables, constraints, LinearExpr(dict(obj["terms"]), obj.get("constant", 0.0)))


def dump_lp(lp: LinearProgram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(lp_to_dict(lp), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_lp(path) -> LinearProgram:
    with open(path, encoding="utf-8") as fh:
        return lp_from_dict(json.load(fh))
