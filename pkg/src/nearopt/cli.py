"""Command line front end: solve a scenario, sweep directions, validate manifests.

Subcommands::

    nearopt solve <scenario.json> [--out DIR] [--tol-feas X]
    nearopt sweep <manifest.json> [--out DIR] [--eps LIST] [--tol-feas X]
    nearopt validate <manifest.json>

A sweep writes `optimal_solution.json`, `sweep.csv` and one
`curves/<direction>.svg` per direction into the output directory. Exit
codes: 0 full success, 2 when some sweep rows failed, 1 on fatal errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import cep
from .conditions import (
    DEFAULT_EPSILON_GRID,
    Direction,
    STATUS_FOUND,
    sweep,
    write_sweep_csv,
)
from .errors import InvalidConfigError, NearOptError
from .figures import render_curves
from .lp import OPTIMAL
from .simplex import SolverOptions, solve

DIRECTION_KINDS = ("all_lines", "country", "line", "storage", "res")


@dataclass
class Diagnostic:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


@dataclass
class RunManifest:
    scenario: Path
    epsilon_grid: list[float]
    directions: list[dict]
    output_dir: Path
    tolerances: dict = field(default_factory=dict)

    def solver_options(self) -> SolverOptions:
        opts = SolverOptions()
        mapping = {"feas": "tol_feas", "pivot": "tol_pivot",
                   "opt": "tol_opt", "dual": "tol_dual"}
        for key, attr in mapping.items():
            if key in self.tolerances:
                setattr(opts, attr, float(self.tolerances[key]))
        return opts


def load_manifest(path, out_override=None, eps_override=None,
                  tol_feas_override=None) -> RunManifest:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    base = path.parent
    scenario = Path(data["scenario"])
    if not scenario.is_absolute():
        scenario = base / scenario
    out = Path(out_override) if out_override else Path(data.get("output_dir", "out"))
    if not out.is_absolute() and not out_override:
        out = base / out
    grid = eps_override if eps_override is not None else \
        [float(e) for e in data.get("epsilon_grid", DEFAULT_EPSILON_GRID)]
    tolerances = dict(data.get("tolerances", {}))
    if tol_feas_override is not None:
        tolerances["feas"] = tol_feas_override
    return RunManifest(scenario, grid, list(data.get("directions", [])), out, tolerances)


def build_directions(specs: list[dict], inv: cep.InvestmentIndexMap,
                     network: cep.NetworkModel) -> list[Direction]:
    directions = []
    for spec in specs:
        kind = spec.get("kind")
        label = spec.get("label")
        if kind == "all_lines":
            directions.append(cep.direction_all_lines(inv, network, label or "all_lines"))
        elif kind == "country":
            directions.append(cep.direction_country_lines(inv, network, spec["node"], label))
        elif kind == "line":
            directions.append(cep.direction_single_line(inv, network, spec["line"], label))
        elif kind == "storage":
            directions.append(cep.direction_storage(inv, label or "storage"))
        elif kind == "res":
            directions.append(cep.direction_res(inv, network, spec.get("techs", []), label))
        else:
            raise InvalidConfigError(f"unknown direction kind {kind!r}")
    return directions


def validate(manifest: RunManifest) -> list[Diagnostic]:
    """Machine-readable diagnostics; empty iff a run of this manifest can start."""
    diags: list[Diagnostic] = []
    if not manifest.scenario.exists():
        diags.append(Diagnostic("MissingFile", f"scenario file not found: {manifest.scenario}"))
        return diags
    try:
        config = cep.load_scenario(manifest.scenario)
    except (NearOptError, json.JSONDecodeError) as exc:
        diags.append(Diagnostic("InvalidConfig", str(exc)))
        return diags

    grid = manifest.epsilon_grid
    if not grid:
        diags.append(Diagnostic("EmptyGrid", "epsilon grid must not be empty"))
    if any(e < 0 for e in grid):
        diags.append(Diagnostic("NegativeEpsilon", "epsilon grid values must be >= 0"))
    if any(b <= a for a, b in zip(grid, grid[1:])):
        diags.append(Diagnostic("NonIncreasingGrid", "epsilon grid must be strictly increasing"))
    for key, value in manifest.tolerances.items():
        if key not in ("feas", "pivot", "opt", "dual"):
            diags.append(Diagnostic("UnknownTolerance", f"unknown tolerance {key!r}"))
        elif float(value) <= 0:
            diags.append(Diagnostic("BadTolerance", f"tolerance {key!r} must be positive"))

    if not manifest.directions:
        diags.append(Diagnostic("NoDirections", "at least one direction spec is required"))
    lp, inv = cep.compile_scenario(config)
    labels = []
    for spec in manifest.directions:
        try:
            built = build_directions([spec], inv, config.network)
        except KeyError as exc:
            diags.append(Diagnostic("MissingArgument",
                                    f"direction spec {spec} lacks argument {exc}"))
            continue
        except NearOptError as exc:
            diags.append(Diagnostic(type(exc).__name__.removesuffix("Error"), str(exc)))
            continue
        labels.append(built[0].label)
    dupes = {l for l in labels if labels.count(l) > 1}
    for label in sorted(dupes):
        diags.append(Diagnostic("DuplicateLabel", f"direction label {label!r} used twice"))
    return diags


def _write_solution(path: Path, sol) -> None:
    doc = {
        "status": sol.status,
        "objective_value": sol.objective_value,
        "primal": sol.primal_by_name(),
        "dual": dict(sorted(sol.dual.items())),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run(manifest: RunManifest) -> int:
    """Execute a sweep manifest end to end; returns the process exit code."""
    diags = validate(manifest)
    if diags:
        for d in diags:
            print(d, file=sys.stderr)
        return 1
    config = cep.load_scenario(manifest.scenario)
    lp, inv = cep.compile_scenario(config)
    options = manifest.solver_options()
    try:
        sol = solve(lp, options)
    except NearOptError as exc:
        print(f"SolveFailed: {exc}", file=sys.stderr)
        return 1
    if sol.status != OPTIMAL:
        print(f"BaseNotOptimal: base program is {sol.status}", file=sys.stderr)
        return 1

    out = manifest.output_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_solution(out / "optimal_solution.json", sol)
    directions = build_directions(manifest.directions, inv, config.network)
    table = sweep(lp, sol, manifest.epsilon_grid, directions, options)
    write_sweep_csv(table, out / "sweep.csv")
    render_curves(table, out / "curves")
    failures = [r for r in table.rows if r.status != STATUS_FOUND]
    for row in failures:
        print(f"RowFailed: direction={row.direction_label} epsilon={row.epsilon:g} "
              f"status={row.status}", file=sys.stderr)
    print(f"objective {sol.objective_value:.9g}; {len(table.rows)} sweep rows "
          f"({len(failures)} failed); outputs in {out}")
    return 2 if failures else 0


def cmd_solve(args) -> int:
    path = Path(args.scenario)
    if not path.exists():
        print(f"MissingFile: scenario file not found: {path}", file=sys.stderr)
        return 1
    try:
        config = cep.load_scenario(path)
        lp, _ = cep.compile_scenario(config)
        options = SolverOptions()
        if args.tol_feas:
            options.tol_feas = args.tol_feas
        sol = solve(lp, options)
    except (NearOptError, json.JSONDecodeError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if sol.status != OPTIMAL:
        print(f"BaseNotOptimal: base program is {sol.status}", file=sys.stderr)
        return 1
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    _write_solution(out / "optimal_solution.json", sol)
    print(f"objective {sol.objective_value:.9g}; solution in {out / 'optimal_solution.json'}")
    return 0


def _parse_eps(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def cmd_sweep(args) -> int:
    try:
        manifest = load_manifest(args.manifest, out_override=args.out,
                                 eps_override=_parse_eps(args.eps) if args.eps else None,
                                 tol_feas_override=args.tol_feas)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"BadManifest: {exc}", file=sys.stderr)
        return 1
    return run(manifest)


def cmd_validate(args) -> int:
    try:
        manifest = load_manifest(args.manifest)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"BadManifest: {exc}", file=sys.stderr)
        return 1
    diags = validate(manifest)
    for d in diags:
        print(d)
    if not diags:
        print("manifest is valid")
    return 1 if diags else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nearopt",
        description="Minimum-investment conditions over near-optimal spaces "
                    "of capacity-expansion programs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a scenario and store the optimum")
    p_solve.add_argument("scenario")
    p_solve.add_argument("--out", default=None, help="output directory")
    p_solve.add_argument("--tol-feas", type=float, default=None)
    p_solve.set_defaults(func=cmd_solve)

    p_sweep = sub.add_parser("sweep", help="run a sweep manifest")
    p_sweep.add_argument("manifest")
    p_sweep.add_argument("--out", default=None, help="output directory override")
    p_sweep.add_argument("--eps", default=None,
                         help="comma-separated epsilon grid override")
    p_sweep.add_argument("--tol-feas", type=float, default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="check a manifest without solving")
    p_val.add_argument("manifest")
    p_val.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
