import numpy as np
import pytest

import nearopt as no
from nearopt.errors import TooLargeError
from _support import random_box_lp


def test_box_corners():
    lp = no.build_lp([("a", 0, 1), ("b", 0, 1)], [], no.LinearExpr({"a": 1}))
    verts = no.enumerate_vertices(lp)
    pts = sorted((p[lp.variable("a")], p[lp.variable("b")]) for p in verts)
    assert pts == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]


def test_halfplane_vertices():
    lp = no.build_lp(
        [("x1", 0, 3), ("x2", 0, 3)],
        [no.Constraint(no.LinearExpr({"x1": 1, "x2": 1}), no.GEQ, 2, "c")],
        no.LinearExpr({"x1": 2, "x2": 1}))
    verts = {(round(p[lp.variable("x1")], 6), round(p[lp.variable("x2")], 6))
             for p in no.enumerate_vertices(lp)}
    assert (0.0, 2.0) in verts and (2.0, 0.0) in verts


def test_variable_guard():
    lp = no.build_lp([(f"x{j}", 0, 1) for j in range(13)], [],
                     no.LinearExpr({"x0": 1}))
    with pytest.raises(TooLargeError):
        no.enumerate_vertices(lp)


def test_hyperplane_guard():
    cons = [no.Constraint(no.LinearExpr({"x0": 1, "x1": 1}), no.GEQ, -float(i), f"c{i}")
            for i in range(21)]
    lp = no.build_lp([("x0", 0, 1), ("x1", 0, 1)], cons, no.LinearExpr({"x0": 1}))
    with pytest.raises(TooLargeError):
        no.enumerate_vertices(lp)


def test_parallel_rows_are_skipped_not_fatal():
    cons = [
        no.Constraint(no.LinearExpr({"x1": 1, "x2": 1}), no.GEQ, 1, "c1"),
        no.Constraint(no.LinearExpr({"x1": 2, "x2": 2}), no.GEQ, 2, "c2"),
    ]
    lp = no.build_lp([("x1", 0, 2), ("x2", 0, 2)], cons, no.LinearExpr({"x1": 1}))
    verts = no.enumerate_vertices(lp)
    assert verts  # degenerate pairs skipped, the polygon still comes back


def test_infeasible_program_has_no_vertices():
    cons = [no.Constraint(no.LinearExpr({"x": 1}), no.GEQ, 5, "c")]
    lp = no.build_lp([("x", 0, 1)], cons, no.LinearExpr({"x": 1}))
    assert no.enumerate_vertices(lp) == []


def test_oracle_matches_simplex_sample():
    rng = np.random.default_rng(2024)
    for _ in range(40):
        lp = random_box_lp(rng)
        sol = no.solve(lp)
        best, _ = no.min_objective_over_vertices(lp)
        if sol.status == no.INFEASIBLE:
            assert best is None
        else:
            assert sol.status == no.OPTIMAL
            assert best is not None
            assert abs(sol.objective_value - best) <= 1e-6
