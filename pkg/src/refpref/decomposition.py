"""Unique factorization of bundles as value times a group element acting on a reference.

For a validated group and strictly positive bundles ``x`` and ``R`` the system

    log(x_i / R_i) = log v + exponents[i] @ s

is square and nonsingular in ``(log v, s)``, so every interior bundle has a
unique value ``v > 0`` and group parameter ``s`` with
``x = v * (element(s) @ R)``.  The value ``v`` is what orders bundles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SpecMismatch
from .groups import GroupElement, GroupSpec, apply, as_bundle


@dataclass(frozen=True)
class Decomposition:
    """Value ``v > 0`` and group element with ``bundle = v * (element @ reference)``."""

    v: float
    s: GroupElement

    def __post_init__(self):
        if not (np.isfinite(self.v) and self.v > 0.0):
            raise ValueError(f"decomposition value must be positive and finite, got {self.v}")


def decompose(spec: GroupSpec, x, R) -> Decomposition:
    """Factor ``x`` against the reference ``R``.

    Both bundles must be strictly positive (values are undefined on the
    orthant boundary).  Solved in log coordinates with the factorization
    cached on ``spec``.
    """
    xb = as_bundle(x, spec.l)
    Rb = as_bundle(R, spec.l)
    sol = spec.solve_log_system(np.log(xb) - np.log(Rb))
    return Decomposition(v=float(np.exp(sol[0])), s=GroupElement(spec, sol[1:]))


def recompose(spec: GroupSpec, d: Decomposition, R) -> np.ndarray:
    """Rebuild the bundle ``d.v * (element(d.s) @ R)``."""
    if d.s.spec != spec:
        raise SpecMismatch("decomposition belongs to a different group")
    return d.v * apply(spec, d.s, R)


def change_reference(spec: GroupSpec, d_x: Decomposition, d_y: Decomposition) -> Decomposition:
    """Rebase two same-reference decompositions: the decomposition of Y against X.

    If ``X = v_x * (M_x @ R)`` and ``Y = v_y * (M_y @ R)`` then
    ``Y = (v_y / v_x) * (M_y M_x^{-1} @ X)``, i.e. value ratio and parameter
    difference.  Agrees with ``decompose(spec, Y, X)``.
    """
    if d_x.s.spec != spec or d_y.s.spec != spec:
        raise SpecMismatch("decompositions belong to a different group")
    return Decomposition(
        v=d_y.v / d_x.v,
        s=GroupElement(spec, d_y.s.params - d_x.s.params),
    )
