"""Scenario-driven command line front end.

Commands
--------
validate     check each agent's group (unique decomposability) and coercivity
demand       per-agent optimal bundles, by optimizer and/or closed form
verify       re-solve each agent's demand under random reference vectors and
             report the largest deviation (reference neutrality check)
equilibrium  market-clearing prices for an endowment economy

Scenario files are JSON documents::

    {
      "commodities": 2,
      "prices": [0.25, 0.75],
      "agents": [
        {"exponents": [[1], [-1]], "reference": [2, 1], "budget": 200},
        {"exponents": [[1], [-1]], "reference": [1, 3], "endowment": [4, 1]}
      ]
    }

Each agent carries exactly one of ``budget`` or ``endowment``.

Exit codes: 0 success, 2 scenario parse or data failure, 3 invalid group,
4 group not coercive, 5 equilibrium did not converge (report still printed).
Failed verification returns 1.  All randomness is seeded; the seed appears in
every report header.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .demand import demand_closed_form, demand_direct, find_min_matrix
from .economy import Agent, tatonnement
from .errors import (
    BadShape,
    NotCoercive,
    RefPrefError,
    ScenarioError,
    SingularSystem,
)
from .groups import GroupSpec, validate_group

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_INVALID_GROUP = 3
EXIT_NOT_COERCIVE = 4
EXIT_NO_CONVERGENCE = 5

VERIFY_TOL = 1e-8


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


@dataclass
class ScenarioAgent:
    exponents: list
    reference: list
    budget: float | None
    endowment: list | None


@dataclass
class Scenario:
    commodities: int
    prices: list
    agents: list[ScenarioAgent]


def parse_scenario(path: str) -> Scenario:
    """Load and structurally validate a scenario file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc

    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a JSON object")
    try:
        l = doc["commodities"]
        prices = doc["prices"]
        agents_doc = doc["agents"]
    except KeyError as exc:
        raise ScenarioError(f"scenario is missing key {exc}") from exc
    if not isinstance(l, int) or l < 2:
        raise ScenarioError("'commodities' must be an integer >= 2")
    if not isinstance(prices, list) or len(prices) != l:
        raise ScenarioError(f"'prices' must be a list of {l} numbers")
    if not isinstance(agents_doc, list) or not agents_doc:
        raise ScenarioError("'agents' must be a non-empty list")

    agents = []
    for i, entry in enumerate(agents_doc):
        if not isinstance(entry, dict):
            raise ScenarioError(f"agent {i} must be an object")
        for key in ("exponents", "reference"):
            if key not in entry:
                raise ScenarioError(f"agent {i} is missing '{key}'")
        has_budget = "budget" in entry
        has_endowment = "endowment" in entry
        if has_budget == has_endowment:
            raise ScenarioError(f"agent {i} needs exactly one of 'budget' and 'endowment'")
        if not isinstance(entry["reference"], list) or len(entry["reference"]) != l:
            raise ScenarioError(f"agent {i}: 'reference' must be a list of {l} numbers")
        if has_endowment and (
            not isinstance(entry["endowment"], list) or len(entry["endowment"]) != l
        ):
            raise ScenarioError(f"agent {i}: 'endowment' must be a list of {l} numbers")
        agents.append(
            ScenarioAgent(
                exponents=entry["exponents"],
                reference=entry["reference"],
                budget=float(entry["budget"]) if has_budget else None,
                endowment=entry["endowment"] if has_endowment else None,
            )
        )
    return Scenario(commodities=l, prices=prices, agents=agents)


def _build_group(scenario: Scenario, agent: ScenarioAgent) -> GroupSpec:
    return validate_group(scenario.commodities, agent.exponents)


def _agent_wealth(prices: np.ndarray, agent: ScenarioAgent) -> float:
    if agent.budget is not None:
        return agent.budget
    return float(prices @ np.asarray(agent.endowment, dtype=float))


def _header(args, scenario: Scenario | None = None) -> None:
    print(f"scenario: {args.scenario}")
    print(f"seed: {args.seed}")
    if scenario is not None:
        print(f"commodities: {scenario.commodities}")


def cmd_validate(args) -> int:
    scenario = parse_scenario(args.scenario)
    _header(args, scenario)
    any_invalid = False
    for i, agent in enumerate(scenario.agents):
        try:
            spec = _build_group(scenario, agent)
        except (SingularSystem, BadShape) as exc:
            print(f"agent {i}: invalid: {exc}")
            any_invalid = True
            continue
        coercive = spec.coercive
        if coercive is None:
            # settle the advisory by actually running the solver
            try:
                coercive = find_min_matrix(spec).converged
            except NotCoercive:
                coercive = False
        print(f"agent {i}: valid, {'coercive' if coercive else 'not coercive'}")
    return EXIT_INVALID_GROUP if any_invalid else EXIT_OK


def _demand_rows(scenario: Scenario, method: str):
    """Per-agent demand results; returns (rows, discrepancies)."""
    prices = np.asarray(scenario.prices, dtype=float)
    rows = []
    discrepancies = []
    for agent in scenario.agents:
        spec = _build_group(scenario, agent)
        wealth = _agent_wealth(prices, agent)
        direct = closed = None
        if method in ("direct", "both"):
            direct = demand_direct(spec, prices, wealth, agent.reference)
        if method in ("closed", "both"):
            closed = demand_closed_form(spec, prices, wealth=wealth, R=agent.reference)
        chosen = direct if direct is not None else closed
        rows.append(chosen)
        if direct is not None and closed is not None:
            rel = np.abs(direct.x_star - closed.x_star) / np.abs(closed.x_star)
            discrepancies.append(float(rel.max()))
    return rows, discrepancies


def _print_demand_table(scenario: Scenario, rows, discrepancies) -> None:
    l = scenario.commodities
    cols = ["agent"] + [f"x_{j + 1}" for j in range(l)] + ["v_max"]
    cols += [f"s_{j + 1}" for j in range(l - 1)]
    if discrepancies:
        cols.append("discrepancy")
    print("  ".join(f"{c:>16}" for c in cols))
    for i, res in enumerate(rows):
        cells = [str(i)] + [_fmt(v) for v in res.x_star] + [_fmt(res.v_max)]
        cells += [_fmt(v) for v in res.s_star.params]
        if discrepancies:
            cells.append(_fmt(discrepancies[i]))
        print("  ".join(f"{c:>16}" for c in cells))


def _write_csv(path: str, scenario: Scenario, rows) -> None:
    l = scenario.commodities
    header = ["agent_index"] + [f"x_{j + 1}" for j in range(l)] + ["v_max"]
    header += [f"s_{j + 1}" for j in range(l - 1)]
    lines = [",".join(header)]
    for i, res in enumerate(rows):
        cells = [str(i)] + [_fmt(v) for v in res.x_star] + [_fmt(res.v_max)]
        cells += [_fmt(v) for v in res.s_star.params]
        lines.append(",".join(cells))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def cmd_demand(args) -> int:
    scenario = parse_scenario(args.scenario)
    _header(args, scenario)
    print(f"prices: {' '.join(_fmt(p) for p in scenario.prices)}")
    print(f"method: {args.method}")
    rows, discrepancies = _demand_rows(scenario, args.method)
    _print_demand_table(scenario, rows, discrepancies)
    if discrepancies:
        print(f"max discrepancy: {_fmt(max(discrepancies))}")
    if args.csv:
        _write_csv(args.csv, scenario, rows)
        print(f"csv written: {args.csv}")
    return EXIT_OK


def cmd_verify(args) -> int:
    scenario = parse_scenario(args.scenario)
    _header(args, scenario)
    print(f"references per agent: {args.references} (first one is the agent's own)")
    prices = np.asarray(scenario.prices, dtype=float)
    rng = np.random.default_rng(args.seed)
    overall = 0.0
    for i, agent in enumerate(scenario.agents):
        spec = _build_group(scenario, agent)
        wealth = _agent_wealth(prices, agent)
        base = demand_direct(spec, prices, wealth, agent.reference).x_star
        closed = demand_closed_form(spec, prices, wealth=wealth).x_star
        closed_dev = float((np.abs(base - closed) / np.abs(closed)).max())
        dev = 0.0
        for k in range(args.references):
            if k == 0:
                ref = np.asarray(agent.reference, dtype=float)
            else:
                ref = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), size=spec.l))
            x = demand_direct(spec, prices, wealth, ref).x_star
            dev = max(dev, float((np.abs(x - base) / np.abs(base)).max()))
        print(f"agent {i}: max deviation {dev:.3e} (closed-form gap {closed_dev:.3e})")
        overall = max(overall, dev, closed_dev)
    print(f"overall max deviation: {overall:.3e}")
    ok = overall <= VERIFY_TOL
    print(f"{'PASS' if ok else 'FAIL'} (tolerance {VERIFY_TOL:.1e})")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_equilibrium(args) -> int:
    scenario = parse_scenario(args.scenario)
    _header(args, scenario)
    agents = []
    for i, sa in enumerate(scenario.agents):
        if sa.endowment is None:
            raise ScenarioError(
                f"agent {i} has a budget but the equilibrium command needs endowments"
            )
        spec = _build_group(scenario, sa)
        agents.append(Agent(spec=spec, reference=sa.reference, endowment=sa.endowment))
    p0 = np.asarray(scenario.prices, dtype=float)
    result = tatonnement(
        agents, p0, step=args.step, tol=args.tol, max_iters=args.max_iters
    )
    print(f"agents: {len(agents)}")
    print(f"p_star: {' '.join(_fmt(p) for p in result.p_star)}")
    print(f"max excess: {result.excess_norm:.3e}")
    print(f"iterations: {result.iterations}")
    print(f"walras residual (relative): {result.max_walras_rel:.3e}")
    print(f"converged: {'yes' if result.converged else 'no'}")
    return EXIT_OK if result.converged else EXIT_NO_CONVERGENCE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="refpref",
        description="Referential-preference demand and exchange-economy computations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("scenario", help="path to a scenario JSON file")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    p_validate = sub.add_parser("validate", help="check groups and coercivity per agent")
    add_common(p_validate)
    p_validate.set_defaults(func=cmd_validate)

    p_demand = sub.add_parser("demand", help="per-agent demanded bundles")
    add_common(p_demand)
    p_demand.add_argument(
        "--method",
        choices=("direct", "closed", "both"),
        default="direct",
        help="optimizer route, closed form, or both with a discrepancy report",
    )
    p_demand.add_argument("--csv", metavar="PATH", help="also write results as CSV")
    p_demand.set_defaults(func=cmd_demand)

    p_verify = sub.add_parser(
        "verify", help="check demand is unchanged under random reference vectors"
    )
    add_common(p_verify)
    p_verify.add_argument(
        "--references",
        type=int,
        default=100,
        help="references per agent, the first being the agent's own (default 100)",
    )
    p_verify.set_defaults(func=cmd_verify)

    p_eq = sub.add_parser("equilibrium", help="find market-clearing prices")
    add_common(p_eq)
    p_eq.add_argument("--step", type=float, default=0.1, help="initial price step (default 0.1)")
    p_eq.add_argument("--tol", type=float, default=1e-8, help="excess-demand tolerance")
    p_eq.add_argument("--max-iters", type=int, default=100_000, help="iteration cap")
    p_eq.set_defaults(func=cmd_equilibrium)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SingularSystem, BadShape) as exc:
        print(f"error: invalid group: {exc}", file=sys.stderr)
        return EXIT_INVALID_GROUP
    except NotCoercive as exc:
        print(f"error: not coercive: {exc}", file=sys.stderr)
        return EXIT_NOT_COERCIVE
    except RefPrefError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
