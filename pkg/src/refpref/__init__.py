"""Referential preferences from diagonal exponential matrix-group actions.

Bundles in the strictly positive orthant factor uniquely as a scalar value
times a group element acting on a reference vector; the value orders bundles,
drives consumer demand, and is provably independent of the reference where it
matters.  The package provides the group machinery, the decomposition, the
preference order, the demand solvers (optimizer and closed form), brute-force
oracles, and a pure-exchange equilibrium layer.
"""

from .decomposition import Decomposition, change_reference, decompose, recompose
from .demand import (
    DemandResult,
    MinMatrixResult,
    decompose_price,
    demand_closed_form,
    demand_direct,
    find_min_matrix,
    satisfaction,
)
from .economy import Agent, EquilibriumResult, excess_demand, tatonnement
from .errors import (
    BadShape,
    BothBoundary,
    BoxTooLarge,
    NegativeCoordinate,
    NonPositiveBundle,
    NonPositivePrice,
    NotCoercive,
    RefPrefError,
    ScenarioError,
    SingularSystem,
    SpecMismatch,
    ZeroWealth,
)
from .groups import (
    GroupElement,
    GroupSpec,
    apply,
    as_bundle,
    compose,
    identity,
    inverse,
    is_interior,
    validate_group,
)
from .oracle import GridMinResult, budget_sampler_check, grid_min
from .preference import (
    FIRST_PREFERRED,
    INDIFFERENT,
    SECOND_PREFERRED,
    PreferenceVerdict,
    indifferent,
    prefer,
    value,
)

__version__ = "0.1.0"

__all__ = [
    "Agent",
    "BadShape",
    "BothBoundary",
    "BoxTooLarge",
    "Decomposition",
    "DemandResult",
    "EquilibriumResult",
    "FIRST_PREFERRED",
    "GridMinResult",
    "GroupElement",
    "GroupSpec",
    "INDIFFERENT",
    "MinMatrixResult",
    "NegativeCoordinate",
    "NonPositiveBundle",
    "NonPositivePrice",
    "NotCoercive",
    "PreferenceVerdict",
    "RefPrefError",
    "ScenarioError",
    "SECOND_PREFERRED",
    "SingularSystem",
    "SpecMismatch",
    "ZeroWealth",
    "apply",
    "as_bundle",
    "budget_sampler_check",
    "change_reference",
    "compose",
    "decompose",
    "decompose_price",
    "demand_closed_form",
    "demand_direct",
    "excess_demand",
    "find_min_matrix",
    "grid_min",
    "identity",
    "indifferent",
    "inverse",
    "is_interior",
    "prefer",
    "recompose",
    "satisfaction",
    "tatonnement",
    "validate_group",
    "value",
]
