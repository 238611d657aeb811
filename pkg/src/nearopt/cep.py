"""Desk-scale capacity-expansion planning: network model, LP compiler, directions.

The model covers nodes with load series, transport-model lines (two
nonnegative flow variables per line and timestep), dispatchable / renewable /
fixed generators, duration-coupled storage, load shedding at a penalty
price, and one global emissions cap. `compile_scenario` turns a scenario
into a LinearProgram plus an index of its investment variables, on which
the direction builders below construct weighted sums (line weights carry
length/1000 so the totals read in TWkm).

Units: power in GW, energy in GWh, one consistent currency unit throughout
(capex per GW and per horizon, opex and voll per GWh, emissions in tonnes
per GWh against an absolute cap in tonnes).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .conditions import Direction
from .errors import (
    EmptySubsetError,
    InvalidConfigError,
    UnknownLineError,
    UnknownNodeError,
    UnknownTechError,
)
from .lp import Constraint, EQ, LEQ, LinearExpr, LinearProgram, VariableId, build_lp

DISPATCHABLE = "dispatchable"
RENEWABLE = "renewable"
FIXED = "fixed"


@dataclass
class NodeSpec:
    id: str
    load: list[float]


@dataclass
class Line:
    id: str
    from_node: str
    to_node: str
    kind: str = "AC"
    length_km: float = 1.0
    initial_capacity: float = 0.0
    max_capacity: float = math.inf
    capex: float = 0.0  # currency per GW.km per horizon
    flow_limit_factor: float = 0.7


@dataclass
class GeneratorTech:
    id: str
    node: str
    kind: str
    capex: float = 0.0
    opex: float = 0.0
    co2_rate: float = 0.0  # tonnes per GWh
    capacity_factor: list[float] | None = None
    initial_capacity: float = 0.0
    max_capacity: float = math.inf


@dataclass
class StorageTech:
    id: str
    node: str
    power_capex: float = 0.0
    duration: float = 4.0  # hours of discharge at peak power
    charge_efficiency: float = 0.95
    discharge_efficiency: float = 0.95
    initial_power: float = 0.0


@dataclass
class NetworkModel:
    nodes: list[NodeSpec]
    lines: list[Line] = field(default_factory=list)
    generators: list[GeneratorTech] = field(default_factory=list)
    storages: list[StorageTech] = field(default_factory=list)

    def node(self, node_id: str) -> NodeSpec:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise UnknownNodeError(f"unknown node {node_id!r}")

    def line(self, line_id: str) -> Line:
        for l in self.lines:
            if l.id == line_id:
                return l
        raise UnknownLineError(f"unknown line {line_id!r}")


@dataclass
class ScenarioConfig:
    horizon: int
    network: NetworkModel
    step_hours: float = 2.0
    voll: float = 3000.0  # currency per GWh of shed energy
    co2_cap: float = math.inf  # tonnes over the horizon


@dataclass
class InvestmentIndexMap:
    """Investment variables of a compiled scenario, keyed by element id."""

    line_capacity: dict[str, VariableId] = field(default_factory=dict)
    generator_capacity: dict[str, VariableId] = field(default_factory=dict)
    storage_power: dict[str, VariableId] = field(default_factory=dict)


def validate_config(config: ScenarioConfig) -> None:
    """Raise InvalidConfigError naming the first violated modelling rule."""
    T = config.horizon
    if T < 1:
        raise InvalidConfigError("horizon must be at least 1 timestep")
    if config.step_hours <= 0:
        raise InvalidConfigError("step_hours must be positive")
    if config.co2_cap < 0:
        raise InvalidConfigError("co2_cap must be nonnegative")
    net = config.network
    if not net.nodes:
        raise InvalidConfigError("network needs at least one node")
    node_ids = set()
    for node in net.nodes:
        if node.id in node_ids:
            raise InvalidConfigError(f"duplicate node id {node.id!r}")
        node_ids.add(node.id)
        if len(node.load) != T:
            raise InvalidConfigError(
                f"node {node.id!r}: load series has {len(node.load)} values, expected {T}")
        if any(v < 0 for v in node.load):
            raise InvalidConfigError(f"node {node.id!r}: load values must be nonnegative")
    seen = set()
    for line in net.lines:
        if line.id in seen:
            raise InvalidConfigError(f"duplicate line id {line.id!r}")
        seen.add(line.id)
        if line.from_node not in node_ids or line.to_node not in node_ids:
            raise InvalidConfigError(f"line {line.id!r}: endpoint not in network")
        if line.kind not in ("AC", "DC"):
            raise InvalidConfigError(f"line {line.id!r}: kind must be AC or DC")
        if line.length_km <= 0:
            raise InvalidConfigError(f"line {line.id!r}: length must be positive")
        if not (0.0 <= line.initial_capacity <= line.max_capacity):
            raise InvalidConfigError(
                f"line {line.id!r}: needs 0 <= initial_capacity <= max_capacity")
        if not (0.0 < line.flow_limit_factor <= 1.0):
            raise InvalidConfigError(f"line {line.id!r}: flow_limit_factor must be in (0, 1]")
    seen = set()
    max_opex = 0.0
    for gen in net.generators:
        if gen.id in seen:
            raise InvalidConfigError(f"duplicate generator id {gen.id!r}")
        seen.add(gen.id)
        if gen.node not in node_ids:
            raise InvalidConfigError(f"generator {gen.id!r}: node not in network")
        if gen.kind not in (DISPATCHABLE, RENEWABLE, FIXED):
            raise InvalidConfigError(f"generator {gen.id!r}: unknown kind {gen.kind!r}")
        if gen.kind == RENEWABLE:
            if gen.capacity_factor is None:
                raise InvalidConfigError(
                    f"generator {gen.id!r}: renewable generators need a capacity_factor series")
            if len(gen.capacity_factor) != T:
                raise InvalidConfigError(
                    f"generator {gen.id!r}: capacity_factor length differs from horizon")
            if any(not (0.0 <= v <= 1.0) for v in gen.capacity_factor):
                raise InvalidConfigError(
                    f"generator {gen.id!r}: capacity factors must lie in [0, 1]")
        elif gen.capacity_factor is not None and len(gen.capacity_factor) != T:
            raise InvalidConfigError(
                f"generator {gen.id!r}: capacity_factor length differs from horizon")
        if not (0.0 <= gen.initial_capacity <= gen.max_capacity):
            raise InvalidConfigError(
                f"generator {gen.id!r}: needs 0 <= initial_capacity <= max_capacity")
        if gen.co2_rate < 0:
            raise InvalidConfigError(f"generator {gen.id!r}: co2_rate must be nonnegative")
        max_opex = max(max_opex, gen.opex)
    seen = set()
    for sto in net.storages:
        if sto.id in seen:
            raise InvalidConfigError(f"duplicate storage id {sto.id!r}")
        seen.add(sto.id)
        if sto.node not in node_ids:
            raise InvalidConfigError(f"storage {sto.id!r}: node not in network")
        if sto.duration <= 0:
            raise InvalidConfigError(f"storage {sto.id!r}: duration must be positive")
        for eff in (sto.charge_efficiency, sto.discharge_efficiency):
            if not (0.0 < eff <= 1.0):
                raise InvalidConfigError(f"storage {sto.id!r}: efficiencies must be in (0, 1]")
        if sto.initial_power < 0:
            raise InvalidConfigError(f"storage {sto.id!r}: initial_power must be nonnegative")
    if config.voll <= max_opex:
        raise InvalidConfigError(
            f"voll ({config.voll}) must exceed every generator opex (max {max_opex}); "
            "shedding has to be the last resort")


def compile_scenario(config: ScenarioConfig) -> tuple[LinearProgram, InvestmentIndexMap]:
    """Compile a scenario into a minimisation LP and its investment index.

    Per node and timestep, generation plus storage discharge minus charge
    plus net imports plus shed equals load. Line flows are limited to
    flow_limit_factor times installed capacity in each direction; renewable
    output to capacity factor times installed capacity (free curtailment);
    storage follows a cyclic state-of-charge recursion with charge and
    discharge efficiencies and an energy cap of duration times power.
    Emissions over the horizon stay under co2_cap. The objective adds
    investment costs (line capex scaled by length) to energy costs of
    generation and shedding. Variable ordering is stable: investments
    first, then operations element by element and timestep by timestep.
    """
    validate_config(config)
    net = config.network
    T = config.horizon
    h = config.step_hours

    variables: list[tuple] = []
    obj_terms: dict[str, float] = {}

    def add_var(name: str, lower: float, upper: float, cost: float = 0.0) -> str:
        variables.append((name, lower, upper))
        if cost:
            obj_terms[name] = obj_terms.get(name, 0.0) + cost
        return name

    inv = InvestmentIndexMap()
    line_cap: dict[str, str] = {}
    for line in net.lines:
        line_cap[line.id] = add_var(f"line_cap[{line.id}]", 0.0,
                                    line.max_capacity - line.initial_capacity,
                                    cost=line.capex * line.length_km)
    gen_cap: dict[str, str] = {}
    for gen in net.generators:
        if gen.kind == FIXED:
            continue
        gen_cap[gen.id] = add_var(f"gen_cap[{gen.id}]", 0.0,
                                  gen.max_capacity - gen.initial_capacity,
                                  cost=gen.capex)
    sto_pow: dict[str, str] = {}
    for sto in net.storages:
        sto_pow[sto.id] = add_var(f"sto_pow[{sto.id}]", 0.0, math.inf,
                                  cost=sto.power_capex)

    flow_fwd: dict[tuple, str] = {}
    flow_bwd: dict[tuple, str] = {}
    for line in net.lines:
        for t in range(T):
            flow_fwd[line.id, t] = add_var(f"flow_fwd[{line.id},{t}]", 0.0, math.inf)
            flow_bwd[line.id, t] = add_var(f"flow_bwd[{line.id},{t}]", 0.0, math.inf)
    output: dict[tuple, str] = {}
    for gen in net.generators:
        for t in range(T):
            if gen.kind == FIXED:
                cf = 1.0 if gen.capacity_factor is None else gen.capacity_factor[t]
                upper = cf * gen.initial_capacity
            else:
                upper = math.inf
            output[gen.id, t] = add_var(f"gen[{gen.id},{t}]", 0.0, upper,
                                        cost=h * gen.opex)
    charge: dict[tuple, str] = {}
    discharge: dict[tuple, str] = {}
    soc: dict[tuple, str] = {}
    for sto in net.storages:
        for t in range(T):
            charge[sto.id, t] = add_var(f"charge[{sto.id},{t}]", 0.0, math.inf)
            discharge[sto.id, t] = add_var(f"discharge[{sto.id},{t}]", 0.0, math.inf)
            soc[sto.id, t] = add_var(f"soc[{sto.id},{t}]", 0.0, math.inf)
    shed: dict[tuple, str] = {}
    for node in net.nodes:
        for t in range(T):
            shed[node.id, t] = add_var(f"shed[{node.id},{t}]", 0.0, node.load[t],
                                       cost=h * config.voll)

    constraints: list[Constraint] = []

    for node in net.nodes:
        gens_here = [g for g in net.generators if g.node == node.id]
        stos_here = [s for s in net.storages if s.node == node.id]
        lines_in = [l for l in net.lines if l.to_node == node.id]
        lines_out = [l for l in net.lines if l.from_node == node.id]
        for t in range(T):
            terms: dict[str, float] = {}
            for g in gens_here:
                terms[output[g.id, t]] = 1.0
            for s in stos_here:
                terms[discharge[s.id, t]] = 1.0
                terms[charge[s.id, t]] = -1.0
            for l in lines_in:
                terms[flow_fwd[l.id, t]] = 1.0
                terms[flow_bwd[l.id, t]] = -1.0
            for l in lines_out:
                terms[flow_fwd[l.id, t]] = terms.get(flow_fwd[l.id, t], 0.0) - 1.0
                terms[flow_bwd[l.id, t]] = terms.get(flow_bwd[l.id, t], 0.0) + 1.0
            terms[shed[node.id, t]] = 1.0
            constraints.append(Constraint(LinearExpr(terms), EQ, node.load[t],
                                          f"balance[{node.id},{t}]"))

    for line in net.lines:
        factor = line.flow_limit_factor
        cap_rhs = factor * line.initial_capacity
        for t in range(T):
            constraints.append(Constraint(
                LinearExpr({flow_fwd[line.id, t]: 1.0, line_cap[line.id]: -factor}),
                LEQ, cap_rhs, f"flow_cap_fwd[{line.id},{t}]"))
            constraints.append(Constraint(
                LinearExpr({flow_bwd[line.id, t]: 1.0, line_cap[line.id]: -factor}),
                LEQ, cap_rhs, f"flow_cap_bwd[{line.id},{t}]"))

    for gen in net.generators:
        if gen.kind == FIXED:
            continue  # handled through variable bounds
        for t in range(T):
            cf = gen.capacity_factor[t] if gen.kind == RENEWABLE else 1.0
            if cf == 0.0:
                constraints.append(Constraint(
                    LinearExpr({output[gen.id, t]: 1.0}), LEQ, 0.0,
                    f"gen_cap[{gen.id},{t}]"))
            else:
                constraints.append(Constraint(
                    LinearExpr({output[gen.id, t]: 1.0, gen_cap[gen.id]: -cf}),
                    LEQ, cf * gen.initial_capacity, f"gen_cap[{gen.id},{t}]"))

    for sto in net.storages:
        eta_c = sto.charge_efficiency
        eta_d = sto.discharge_efficiency
        for t in range(T):
            prev = soc[sto.id, (t - 1) % T]  # cyclic: SoC wraps around the horizon
            terms = {charge[sto.id, t]: -eta_c * h,
                     discharge[sto.id, t]: h / eta_d}
            if prev == soc[sto.id, t]:
                pass  # T == 1: the SoC terms cancel, leaving net throughput = 0
            else:
                terms[soc[sto.id, t]] = 1.0
                terms[prev] = -1.0
            constraints.append(Constraint(LinearExpr(terms), EQ, 0.0,
                                          f"soc_balance[{sto.id},{t}]"))
            constraints.append(Constraint(
                LinearExpr({soc[sto.id, t]: 1.0, sto_pow[sto.id]: -sto.duration}),
                LEQ, sto.duration * sto.initial_power, f"soc_cap[{sto.id},{t}]"))
            constraints.append(Constraint(
                LinearExpr({charge[sto.id, t]: 1.0, sto_pow[sto.id]: -1.0}),
                LEQ, sto.initial_power, f"charge_cap[{sto.id},{t}]"))
            constraints.append(Constraint(
                LinearExpr({discharge[sto.id, t]: 1.0, sto_pow[sto.id]: -1.0}),
                LEQ, sto.initial_power, f"discharge_cap[{sto.id},{t}]"))

    if math.isfinite(config.co2_cap):
        terms = {}
        for gen in net.generators:
            if gen.co2_rate == 0.0:
                continue
            for t in range(T):
                terms[output[gen.id, t]] = h * gen.co2_rate
        if terms:
            constraints.append(Constraint(LinearExpr(terms), LEQ, config.co2_cap, "co2_cap"))

    lp = build_lp(variables, constraints, LinearExpr(obj_terms))
    for line_id, name in line_cap.items():
        inv.line_capacity[line_id] = lp.variable(name)
    for gen_id, name in gen_cap.items():
        inv.generator_capacity[gen_id] = lp.variable(name)
    for sto_id, name in sto_pow.items():
        inv.storage_power[sto_id] = lp.variable(name)
    return lp, inv


# --- direction builders ---

def direction_all_lines(inv: InvestmentIndexMap, network: NetworkModel,
                        label: str = "all_lines") -> Direction:
    """Weight length/1000 on every line-capacity variable, so sums read in TWkm."""
    weights = {inv.line_capacity[line.id]: line.length_km / 1000.0
               for line in network.lines if line.id in inv.line_capacity}
    return Direction(weights, label)


def direction_country_lines(inv: InvestmentIndexMap, network: NetworkModel,
                            node_id: str, label: str | None = None) -> Direction:
    """TWkm direction over the lines incident to one node."""
    network.node(node_id)
    weights = {inv.line_capacity[line.id]: line.length_km / 1000.0
               for line in network.lines
               if node_id in (line.from_node, line.to_node)}
    return Direction(weights, label or f"lines_{node_id}")


def direction_single_line(inv: InvestmentIndexMap, network: NetworkModel,
                          line_id: str, label: str | None = None) -> Direction:
    line = network.line(line_id)
    if line.id not in inv.line_capacity:
        raise UnknownLineError(f"line {line_id!r} has no investment variable")
    return Direction({inv.line_capacity[line.id]: line.length_km / 1000.0},
                     label or f"line_{line_id}")


def direction_storage(inv: InvestmentIndexMap, label: str = "storage") -> Direction:
    """Unit weights on every storage power variable (GW)."""
    return Direction({var: 1.0 for var in inv.storage_power.values()}, label)


def direction_res(inv: InvestmentIndexMap, network: NetworkModel,
                  tech_subset, label: str | None = None) -> Direction:
    """Unit weights on the capacity of the listed renewable technologies."""
    techs = list(tech_subset)
    if not techs:
        raise EmptySubsetError("renewable subset must not be empty")
    renewable_ids = {g.id for g in network.generators if g.kind == RENEWABLE}
    weights = {}
    for tech_id in techs:
        if tech_id not in renewable_ids:
            raise UnknownTechError(f"{tech_id!r} is not a renewable technology of this network")
        weights[inv.generator_capacity[tech_id]] = 1.0
    return Direction(weights, label or "res_" + "+".join(techs))


# --- scenario files ---

def _load_series(value, base_dir: Path, what: str) -> list[float]:
    """Inline array, or path to a CSV file with header `timestep,value`."""
    if isinstance(value, (list, tuple)):
        return [float(v) for v in value]
    path = Path(value)
    if not path.is_absolute():
        path = base_dir / path
    if not path.exists():
        raise InvalidConfigError(f"{what}: series file not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["timestep", "value"]:
            raise InvalidConfigError(
                f"{what}: {path} must start with header 'timestep,value'")
        rows = []
        for row in reader:
            if not row:
                continue
            rows.append((int(row[0]), float(row[1])))
    rows.sort()
    return [v for _, v in rows]


def scenario_from_dict(data: dict, base_dir: Path | None = None) -> ScenarioConfig:
    base_dir = base_dir or Path.cwd()
    try:
        horizon = int(data["horizon"])
        net = data["network"]
        nodes = [NodeSpec(n["id"], _load_series(n["load"], base_dir, f"node {n['id']!r}"))
                 for n in net["nodes"]]
        lines = [Line(l["id"], l["from"], l["to"], l.get("kind", "AC"),
                      float(l.get("length_km", 1.0)),
                      float(l.get("initial_capacity", 0.0)),
                      float(l["max_capacity"]) if l.get("max_capacity") is not None else math.inf,
                      float(l.get("capex", 0.0)),
                      float(l.get("flow_limit_factor", 0.7)))
                 for l in net.get("lines", [])]
        gens = []
        for g in net.get("generators", []):
            cf = g.get("capacity_factor")
            if cf is not None:
                cf = _load_series(cf, base_dir, f"generator {g['id']!r}")
            gens.append(GeneratorTech(
                g["id"], g["node"], g["kind"], float(g.get("capex", 0.0)),
                float(g.get("opex", 0.0)), float(g.get("co2_rate", 0.0)), cf,
                float(g.get("initial_capacity", 0.0)),
                float(g["max_capacity"]) if g.get("max_capacity") is not None else math.inf))
        stos = [StorageTech(s["id"], s["node"], float(s.get("power_capex", 0.0)),
                            float(s.get("duration", 4.0)),
                            float(s.get("charge_efficiency", 0.95)),
                            float(s.get("discharge_efficiency", 0.95)),
                            float(s.get("initial_power", 0.0)))
                for s in net.get("storages", [])]
        co2_cap = data.get("co2_cap")
        config = ScenarioConfig(
            horizon, NetworkModel(nodes, lines, gens, stos),
            float(data.get("step_hours", 2.0)), float(data.get("voll", 3000.0)),
            float(co2_cap) if co2_cap is not None else math.inf)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidConfigError(f"malformed scenario: {exc}") from exc
    validate_config(config)
    return config


def load_scenario(path) -> ScenarioConfig:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return scenario_from_dict(data, base_dir=path.parent)
