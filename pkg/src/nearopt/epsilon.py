"""Budget-augmented programs: the set of feasible points within (1+eps) of optimal cost."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    NegativeEpsilonError,
    NegativeOptimumError,
    NotOptimalError,
)
from .lp import (
    Constraint,
    LEQ,
    LinearProgram,
    OPTIMAL,
    Solution,
    evaluate,
    is_feasible,
    normalize_point,
)

BUDGET_NAME = "eps_budget"


@dataclass
class EpsilonSpace:
    """Base program plus one cost-budget row ``objective <= (1+epsilon)*optimal_value``."""

    base: LinearProgram
    epsilon: float
    optimal_value: float
    budget_constraint_name: str
    augmented: LinearProgram = field(repr=False)
    warm_start: tuple | None = field(default=None, repr=False, compare=False)


def build_epsilon_space(lp: LinearProgram, sol: Solution, epsilon: float,
                        tol_feas: float = 1e-7) -> EpsilonSpace:
    """Augment `lp` with the cost budget implied by `sol` and `epsilon`.

    `sol` must be an optimal solution of `lp`; its objective value is reused
    rather than re-solved so one optimisation can seed a whole sweep.
    """
    if epsilon < 0:
        raise NegativeEpsilonError(f"epsilon must be >= 0, got {epsilon}")
    if sol.status != OPTIMAL:
        raise NotOptimalError(f"solution status is {sol.status!r}, not optimal")
    point = normalize_point(lp, sol.primal)
    if not is_feasible(lp, point, tol=max(tol_feas, 1e-6 * (1 + abs(sol.objective_value)))):
        raise NotOptimalError("solution primal is not feasible for this program")
    value_at_point = evaluate(lp.objective, point)
    if abs(value_at_point - sol.objective_value) > 1e-6 * max(1.0, abs(sol.objective_value)):
        raise NotOptimalError(
            "solution objective value does not match the program objective at its primal")
    if sol.objective_value < -tol_feas:
        raise NegativeOptimumError(
            f"optimal value {sol.objective_value} is negative; "
            "a relative budget needs a nonnegative objective")

    rhs = (1.0 + epsilon) * sol.objective_value
    budget = Constraint(lp.objective, LEQ, rhs, BUDGET_NAME)
    augmented = lp.with_constraints([budget])
    return EpsilonSpace(lp, float(epsilon), sol.objective_value, BUDGET_NAME,
                        augmented, sol.warm_start)


def contains(space: EpsilonSpace, point: Mapping, tol_feas: float = 1e-7) -> bool:
    """True iff `point` satisfies the base constraints, bounds, and the budget.

    `point` may be keyed by VariableId or by variable name.
    """
    return is_feasible(space.augmented, point, tol=tol_feas)
