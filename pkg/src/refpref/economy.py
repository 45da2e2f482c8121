"""Pure-exchange economies: aggregate demand and price adjustment.

Each agent demands via the closed form, so individual demand (and hence the
aggregate excess demand) is independent of the agents' reference vectors.
Budgets are exhausted exactly, which makes the value of aggregate excess
demand vanish at every price vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .demand import as_prices, demand_closed_form
from .errors import BadShape, NotCoercive, ZeroWealth
from .groups import GroupSpec, as_bundle

PRICE_FLOOR = 1e-9


@dataclass(frozen=True, eq=False)
class Agent:
    """One consumer: group, interior reference vector, nonnegative endowment."""

    spec: GroupSpec
    reference: np.ndarray
    endowment: np.ndarray

    def __post_init__(self):
        if self.spec.coercive is False:
            raise NotCoercive("agent's group admits no demand function")
        ref = as_bundle(self.reference, self.spec.l).copy()
        e = np.asarray(self.endowment, dtype=float)
        if e.shape != (self.spec.l,):
            raise BadShape(f"endowment must have length {self.spec.l}, got shape {e.shape}")
        if not np.all(np.isfinite(e)) or np.any(e < 0.0):
            raise BadShape("endowment must be nonnegative and finite")
        e = e.copy()
        ref.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "reference", ref)
        object.__setattr__(self, "endowment", e)


@dataclass(frozen=True)
class EquilibriumResult:
    """Outcome of the price-adjustment loop.

    ``max_walras_rel`` is the largest value of aggregate excess demand seen at
    any iterate, relative to total wealth there (identically zero up to
    rounding when every agent exhausts the budget).
    """

    p_star: np.ndarray
    excess_norm: float
    iterations: int
    converged: bool
    max_walras_rel: float


def _common_l(agents) -> int:
    if not agents:
        raise BadShape("need at least one agent")
    l = agents[0].spec.l
    for i, a in enumerate(agents):
        if a.spec.l != l:
            raise BadShape(f"agent {i} has {a.spec.l} commodities, expected {l}")
    return l


def excess_demand(agents: list[Agent], p) -> np.ndarray:
    """Aggregate demand minus aggregate endowment at prices ``p``.

    Agents are evaluated independently in list order (the sum is
    order-independent; a fixed order keeps runs reproducible).
    """
    l = _common_l(agents)
    pa = as_prices(p, l)
    z = -sum(a.endowment for a in agents)
    for i, agent in enumerate(agents):
        wealth = float(pa @ agent.endowment)
        if wealth <= 0.0:
            raise ZeroWealth(f"agent {i} has zero wealth at these prices")
        z = z + demand_closed_form(agent.spec, pa, agent.endowment).x_star
    return z


def tatonnement(
    agents: list[Agent],
    p0=None,
    step: float = 0.1,
    tol: float = 1e-8,
    max_iters: int = 100_000,
) -> EquilibriumResult:
    """Adjust prices along excess demand until markets clear (or give up).

    Update: ``p <- normalize(max(p + step * z(p), 1e-9))`` on the unit
    simplex, halving the step whenever the excess-demand norm increases.
    Starts from the uniform simplex point when ``p0`` is omitted.
    Non-convergence is reported in the result, never raised.
    """
    l = _common_l(agents)
    if step <= 0.0 or tol <= 0.0:
        raise ValueError("step and tol must be positive")
    if p0 is None:
        p = np.full(l, 1.0 / l)
    else:
        p = as_prices(p0, l).copy()
        p /= p.sum()

    total_endowment = sum(a.endowment for a in agents)
    prev_norm = np.inf
    max_walras_rel = 0.0
    iterations = 0
    converged = False

    while True:
        z = excess_demand(agents, p)
        norm = float(np.abs(z).max())
        total_wealth = float(p @ total_endowment)
        max_walras_rel = max(max_walras_rel, abs(float(p @ z)) / total_wealth)
        if norm <= tol:
            converged = True
            break
        if iterations >= max_iters:
            break
        if norm > prev_norm:
            step *= 0.5
        prev_norm = norm
        p = np.maximum(p + step * z, PRICE_FLOOR)
        p /= p.sum()
        iterations += 1

    return EquilibriumResult(
        p_star=p,
        excess_norm=norm,
        iterations=iterations,
        converged=converged,
        max_walras_rel=max_walras_rel,
    )
