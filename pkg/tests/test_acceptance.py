"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines alongside the pytest verdicts.
"""

import json
import time

import numpy as np

import nearopt as no
from nearopt import cli
from _support import (
    disjoint_directions,
    random_box_lp,
    random_direction,
    random_nonneg_lp,
    ring_config,
    scenario_to_dict,
    toy_island_config,
)

TOL = 1e-6


def _report(name, ok, detail=""):
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"{name} failed: {detail}"


def test_criterion_1_solver_oracle_suite():
    rng = np.random.default_rng(1001)
    start = time.time()
    disagreements = 0
    n_optimal = 0
    for _ in range(200):
        lp = random_box_lp(rng)
        sol = no.solve(lp)
        best, _ = no.min_objective_over_vertices(lp)
        if sol.status == no.INFEASIBLE:
            if best is not None:
                disagreements += 1
        else:
            n_optimal += 1
            if best is None or abs(sol.objective_value - best) > TOL:
                disagreements += 1
    elapsed = time.time() - start
    _report("1 (solver vs enumeration oracle)",
            disagreements == 0 and elapsed < 30.0,
            f"- {n_optimal} optimal/{200} instances, {disagreements} disagreements, "
            f"{elapsed:.1f}s")


def test_criterion_2_hand_analytic_thresholds():
    lp = no.build_lp(
        [("x1", 0, None), ("x2", 0, None)],
        [no.Constraint(no.LinearExpr({"x1": 1, "x2": 1}), no.GEQ, 2, "cover")],
        no.LinearExpr({"x1": 2, "x2": 1}))
    sol = no.solve(lp)
    e2 = no.Direction({lp.variable("x2"): 1.0}, "e2")
    both = no.Direction({lp.variable("x1"): 1.0, lp.variable("x2"): 1.0}, "both")
    c_zero = no.compute_nonimplied(no.build_epsilon_space(lp, sol, 0.0), e2).c_star
    c_half = no.compute_nonimplied(no.build_epsilon_space(lp, sol, 0.5), e2).c_star
    c_both = [no.compute_nonimplied(no.build_epsilon_space(lp, sol, e), both).c_star
              for e in (0.0, 0.1, 0.5, 1.0)]
    ok = (abs(c_zero - 2.0) <= TOL and abs(c_half - 1.0) <= TOL
          and all(abs(c - 2.0) <= TOL for c in c_both))
    _report("2 (hand-analytic thresholds)", ok,
            f"- c*(0)={c_zero:.9f}, c*(0.5)={c_half:.9f}, plateau={c_both}")


def test_criterion_3_theorem_property_suite():
    rng = np.random.default_rng(3003)
    start = time.time()
    grid = (0.0, 0.1, 0.2)
    checked = 0
    for _ in range(50):
        lp = random_nonneg_lp(rng)
        sol = no.solve(lp)
        assert sol.status == no.OPTIMAL
        directions = [random_direction(rng, lp, f"d{k}") for k in range(3)]
        per_direction = {d.label: [] for d in directions}
        for eps in grid:
            space = no.build_epsilon_space(lp, sol, eps)
            vertices = no.enumerate_vertices(space.augmented)
            for d in directions:
                res = no.compute_nonimplied(space, d)
                c_star = res.c_star
                # (a) forward half: every point of the space satisfies the threshold
                for v in vertices:
                    assert d.value_at(v) >= c_star - TOL
                # (b) converse half: a slightly larger threshold fails at the minimizer
                assert d.value_at(res.minimizer) < c_star + 1e-3
                # (d) the base optimum bounds the threshold from above
                assert c_star <= d.value_at(sol.primal) + TOL
                per_direction[d.label].append(c_star)
                checked += 1
        # (c) monotone in the suboptimality coefficient
        for series in per_direction.values():
            for a, b in zip(series, series[1:]):
                assert b <= a + TOL
    elapsed = time.time() - start
    _report("3 (theorem property suite)", elapsed < 120.0,
            f"- {checked} (epsilon, direction) pairs on 50 programs, {elapsed:.1f}s")


def test_criterion_4_superadditivity():
    rng = np.random.default_rng(4004)
    violations = 0
    for _ in range(50):
        lp = random_nonneg_lp(rng)
        sol = no.solve(lp)
        space = no.build_epsilon_space(lp, sol, 0.1)
        d1, d2 = disjoint_directions(rng, lp)
        combined = no.Direction({**d1.weights, **d2.weights}, "sum")
        c1 = no.compute_nonimplied(space, d1).c_star
        c2 = no.compute_nonimplied(space, d2).c_star
        c12 = no.compute_nonimplied(space, combined).c_star
        if c12 < c1 + c2 - TOL:
            violations += 1
    _report("4 (superadditivity on disjoint supports)", violations == 0,
            f"- {violations} violations in 50 instances")


def test_criterion_5_cep_toy_scenario():
    start = time.time()
    lp, inv = no.compile_scenario(toy_island_config())
    sol = no.solve(lp)
    f_ok = abs(sol.objective_value - 23.0) <= TOL
    space = no.build_epsilon_space(lp, sol, 0.1)
    d = no.Direction({inv.generator_capacity["gas"]: 1.0}, "gas_capacity")
    c_star = no.compute_nonimplied(space, d).c_star
    expected = 2.0 - 2.3 / 2989.0
    c_ok = abs(c_star - expected) <= TOL
    # independent oracle: enumerate the augmented program's vertices
    aug = space.augmented.with_objective(no.LinearExpr(dict(d.weights)))
    oracle, _ = no.min_objective_over_vertices(aug)
    o_ok = oracle is not None and abs(oracle - expected) <= TOL
    elapsed = time.time() - start
    _report("5 (capacity-planning toy case)",
            f_ok and c_ok and o_ok and elapsed < 1.0,
            f"- f*={sol.objective_value:.9f}, c*={c_star:.9f} "
            f"(expected {expected:.9f}), oracle={oracle:.9f}, {elapsed:.2f}s")


def test_criterion_6_qualitative_curve_shapes():
    start = time.time()
    config = ring_config()
    lp, inv = no.compile_scenario(config)
    sol = no.solve(lp)
    assert sol.status == no.OPTIMAL

    grid = [0.0, 0.025, 0.05, 0.1, 0.15, 0.2]
    directions = [no.direction_storage(inv),
                  no.direction_all_lines(inv, config.network)]
    directions += [no.direction_single_line(inv, config.network, l.id)
                   for l in config.network.lines]
    table = no.sweep(lp, sol, grid, directions)
    assert all(r.status == "Found" for r in table.rows)
    series = {label: [r.c_star for r in table.column(label)]
              for label in (d.label for d in directions)}

    zero_tol = 1e-6
    # (a) the storage requirement vanishes within the grid although the
    #     optimum builds storage and a dispatchable fallback exists
    storage = series["storage"]
    a_ok = storage[0] > zero_tol and min(storage) <= zero_tol

    # (b) network-wide line requirement: positive at optimality when the
    #     optimum expands lines, and never increasing
    all_lines = series["all_lines"]
    expands = sum(sol.value(v) for v in
                  (f"line_cap[{l.id}]" for l in config.network.lines)) > 1e-3
    b_ok = (expands and all_lines[0] > zero_tol
            and all(b <= a + TOL for a, b in zip(all_lines, all_lines[1:])))

    # (c) no single line stays required longer than the whole network
    def first_zero(vals):
        for eps, v in zip(grid, vals):
            if v <= zero_tol:
                return eps
        return float("inf")

    net_zero = first_zero(all_lines)
    c_ok = True
    for line in config.network.lines:
        vals = series[f"line_{line.id}"]
        c_ok &= first_zero(vals) <= net_zero
        c_ok &= all(v <= a + TOL for v, a in zip(vals, all_lines))
    elapsed = time.time() - start
    _report("6 (qualitative curve shapes)",
            a_ok and b_ok and c_ok and elapsed < 300.0,
            f"- storage {storage[0]:.2f}->{storage[-1]:.2f} GW, "
            f"all-lines {all_lines[0]:.2f}->{all_lines[-1]:.2f} TWkm, {elapsed:.0f}s")


def test_criterion_7_reproducible_sweep(tmp_path):
    from _support import island_storage_config
    scen = tmp_path / "island.json"
    scen.write_text(json.dumps(scenario_to_dict(island_storage_config())))
    man = tmp_path / "manifest.json"
    man.write_text(json.dumps({
        "scenario": "island.json",
        "epsilon_grid": [0.0, 0.05, 0.1],
        "directions": [{"kind": "storage"}],
        "output_dir": "out",
    }))
    assert cli.main(["sweep", str(man), "--out", str(tmp_path / "r1")]) == 0
    assert cli.main(["sweep", str(man), "--out", str(tmp_path / "r2")]) == 0
    b1 = (tmp_path / "r1" / "sweep.csv").read_bytes()
    b2 = (tmp_path / "r2" / "sweep.csv").read_bytes()
    _report("7 (byte-identical sweep outputs)", b1 == b2,
            f"- {len(b1)} bytes compared")
