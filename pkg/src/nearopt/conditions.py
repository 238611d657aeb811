"""Necessary conditions over budget-augmented programs.

For nonnegative weights d, the family of conditions ``d.x >= c`` has exactly
one member that is necessary within the space and implied by no other: the
one with threshold ``c* = min d.x`` over the space. `compute_nonimplied`
finds it by re-solving the augmented program with the weighted sum as
objective; `sweep` repeats that over a grid of suboptimality coefficients
and a list of directions.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .epsilon import EpsilonSpace, build_epsilon_space
from .errors import (
    EpsilonSpaceInfeasibleError,
    IncomparableDirectionsError,
    InvalidDirectionError,
    UnboundedDirectionError,
)
from .lp import (
    INFEASIBLE,
    LinearExpr,
    LinearProgram,
    OPTIMAL,
    Solution,
    UNBOUNDED,
    VariableId,
    evaluate,
)
from .simplex import SolverOptions, solve

DEFAULT_EPSILON_GRID = (0.0, 0.01, 0.025, 0.05, 0.10, 0.15, 0.20)

STATUS_FOUND = "Found"
STATUS_INFEASIBLE = "EpsilonSpaceInfeasible"
STATUS_UNBOUNDED = "UnboundedDirection"


@dataclass
class Direction:
    """Nonnegative weights selecting the variables whose weighted sum is bounded."""

    weights: dict
    label: str

    def __post_init__(self):
        weights = {}
        for var, w in self.weights.items():
            w = float(w)
            if w < 0:
                raise InvalidDirectionError(
                    f"direction {self.label!r}: negative weight on {var!r}")
            if w > 0:
                weights[var] = w
        if not weights:
            raise InvalidDirectionError(
                f"direction {self.label!r}: needs at least one positive weight")
        self.weights = weights

    def value_at(self, point: Mapping) -> float:
        """Weighted sum at a point keyed by VariableId or name."""
        return evaluate(LinearExpr(dict(self.weights)), point)


@dataclass
class ThresholdCondition:
    """Condition ``direction . x >= threshold``; its truth region is a half-space."""

    direction: Direction
    threshold: float

    def holds_at(self, point: Mapping, tol: float = 1e-7) -> bool:
        return self.direction.value_at(point) >= self.threshold - tol


@dataclass
class NecessaryConditionResult:
    """Outcome of one (epsilon, direction) minimisation."""

    epsilon: float
    direction_label: str
    c_star: float | None
    minimizer: dict | None
    status: str = STATUS_FOUND


@dataclass
class SweepTable:
    """Rows sorted by (direction label, epsilon)."""

    rows: list[NecessaryConditionResult]
    epsilon_grid: list[float]
    directions: list[Direction]

    def column(self, label: str) -> list[NecessaryConditionResult]:
        return [r for r in self.rows if r.direction_label == label]


def compute_nonimplied(space: EpsilonSpace, d: Direction,
                       options: SolverOptions | None = None) -> NecessaryConditionResult:
    """Largest threshold c* for which ``d.x >= c`` holds everywhere in `space`.

    c* is the minimum of the weighted sum over the space; the returned
    minimizer witnesses that any larger threshold fails somewhere.
    """
    objective = LinearExpr(dict(d.weights))
    program = space.augmented.with_objective(objective)
    sol = solve(program, options, warm_start=space.warm_start)
    if sol.status == INFEASIBLE:
        raise EpsilonSpaceInfeasibleError(
            f"budget-augmented program infeasible at epsilon={space.epsilon}")
    if sol.status == UNBOUNDED:
        raise UnboundedDirectionError(
            f"direction {d.label!r} is unbounded below over the space")
    return NecessaryConditionResult(space.epsilon, d.label,
                                    sol.objective_value, sol.primal)


def is_necessary(space: EpsilonSpace, cond: ThresholdCondition,
                 options: SolverOptions | None = None, tol: float = 1e-7) -> bool:
    """True iff the condition holds at every point of the space."""
    result = compute_nonimplied(space, cond.direction, options)
    return cond.threshold <= result.c_star + tol


def _proportionality(a: Direction, b: Direction, rel_tol: float = 1e-9) -> float:
    """Factor alpha with b.weights == alpha * a.weights, else raises."""
    if set(a.weights) != set(b.weights):
        raise IncomparableDirectionsError(
            f"directions {a.label!r} and {b.label!r} have different supports")
    ratios = [b.weights[v] / a.weights[v] for v in a.weights]
    alpha = ratios[0]
    for r in ratios[1:]:
        if abs(r - alpha) > rel_tol * max(1.0, abs(alpha)):
            raise IncomparableDirectionsError(
                f"directions {a.label!r} and {b.label!r} are not proportional")
    return alpha


def implies(a: ThresholdCondition, b: ThresholdCondition) -> bool:
    """True iff the truth region of `a` is strictly inside that of `b`.

    Defined only for proportional directions; after rescaling to a common
    direction, strict inclusion is a strict threshold ordering and equal
    thresholds give equal (not included) regions.
    """
    alpha = _proportionality(a.direction, b.direction)
    return a.threshold > b.threshold / alpha


def sweep(lp: LinearProgram, sol: Solution, epsilon_grid: Sequence[float],
          directions: Iterable[Direction],
          options: SolverOptions | None = None) -> SweepTable:
    """One c* per (epsilon, direction); failing rows are recorded, not fatal.

    The budget row is rebuilt per epsilon from the single supplied optimal
    solution. Rows are independent solves; results come back sorted by
    direction label then epsilon.
    """
    grid = [float(e) for e in epsilon_grid]
    if not grid:
        raise ValueError("epsilon grid must not be empty")
    if any(e < 0 for e in grid):
        raise ValueError("epsilon grid values must be >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("epsilon grid must be strictly increasing")
    directions = list(directions)
    if not directions:
        raise ValueError("at least one direction is required")
    labels = [d.label for d in directions]
    if len(set(labels)) != len(labels):
        raise ValueError("direction labels must be unique")

    spaces = {eps: build_epsilon_space(lp, sol, eps) for eps in grid}
    rows = []
    for d in sorted(directions, key=lambda d: d.label):
        for eps in grid:
            try:
                rows.append(compute_nonimplied(spaces[eps], d, options))
            except EpsilonSpaceInfeasibleError:
                rows.append(NecessaryConditionResult(eps, d.label, None, None,
                                                     STATUS_INFEASIBLE))
            except UnboundedDirectionError:
                rows.append(NecessaryConditionResult(eps, d.label, None, None,
                                                     STATUS_UNBOUNDED))
    return SweepTable(rows, grid, directions)


def sweep_to_csv(table: SweepTable) -> str:
    """CSV rendering with 9 significant digits on floating values."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["direction", "epsilon", "c_star", "status"])
    for row in table.rows:
        c_star = "" if row.c_star is None else f"{row.c_star:.9g}"
        writer.writerow([row.direction_label, f"{row.epsilon:.9g}", c_star, row.status])
    return buf.getvalue()


def write_sweep_csv(table: SweepTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(sweep_to_csv(table))
