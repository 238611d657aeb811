"""Necessary investment conditions for near-optimal linear programs.

The toolkit answers "how much can no feasible plan avoid while staying
within (1+epsilon) of the optimal cost?": it solves a base program, builds
the space of solutions within a relative cost budget, and computes, per
nonnegative weighting of variables, the largest threshold that every point
of that space satisfies. A desk-scale capacity-expansion model and a CLI
demonstrate the workflow end to end.
"""

from .conditions import (
    DEFAULT_EPSILON_GRID,
    Direction,
    NecessaryConditionResult,
    SweepTable,
    ThresholdCondition,
    compute_nonimplied,
    implies,
    is_necessary,
    sweep,
    sweep_to_csv,
    write_sweep_csv,
)
from .cep import (
    GeneratorTech,
    InvestmentIndexMap,
    Line,
    NetworkModel,
    NodeSpec,
    ScenarioConfig,
    StorageTech,
    compile_scenario,
    direction_all_lines,
    direction_country_lines,
    direction_res,
    direction_single_line,
    direction_storage,
    load_scenario,
)
from .epsilon import EpsilonSpace, build_epsilon_space, contains
from .lp import (
    EQ,
    GEQ,
    INFEASIBLE,
    LEQ,
    LinearExpr,
    LinearProgram,
    Constraint,
    OPTIMAL,
    Solution,
    UNBOUNDED,
    VariableId,
    build_lp,
    dump_lp,
    evaluate,
    is_feasible,
    load_lp,
    lp_from_dict,
    lp_to_dict,
    to_geq_form,
)
from .simplex import SolverOptions, solve
from .vertices import enumerate_vertices, min_objective_over_vertices
from . import errors

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_EPSILON_GRID", "Direction", "NecessaryConditionResult", "SweepTable",
    "ThresholdCondition", "compute_nonimplied", "implies", "is_necessary", "sweep",
    "sweep_to_csv", "write_sweep_csv",
    "GeneratorTech", "InvestmentIndexMap", "Line", "NetworkModel", "NodeSpec",
    "ScenarioConfig", "StorageTech", "compile_scenario", "direction_all_lines",
    "direction_country_lines", "direction_res", "direction_single_line",
    "direction_storage", "load_scenario",
    "EpsilonSpace", "build_epsilon_space", "contains",
    "EQ", "GEQ", "INFEASIBLE", "LEQ", "LinearExpr", "LinearProgram", "Constraint",
    "OPTIMAL", "Solution", "UNBOUNDED", "VariableId", "build_lp", "dump_lp",
    "evaluate", "is_feasible", "load_lp", "lp_from_dict", "lp_to_dict", "to_geq_form",
    "SolverOptions", "solve",
    "enumerate_vertices", "min_objective_over_vertices",
    "errors",
]
