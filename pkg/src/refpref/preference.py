"""Preference ordering induced by decomposition values.

Interior bundles are ranked by their value against a common reference; equal
values (same group orbit) mean indifference.  Any interior bundle beats any
boundary bundle; two boundary bundles cannot be ranked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import decompose
from .errors import BadShape, BothBoundary, NegativeCoordinate
from .groups import GroupSpec, apply, as_bundle

# Relative gap below which two values count as equal (indifference).
REL_TOL = 1e-9

FIRST_PREFERRED = "first-preferred"
SECOND_PREFERRED = "second-preferred"
INDIFFERENT = "indifferent"


@dataclass(frozen=True)
class PreferenceVerdict:
    """Outcome of comparing two bundles.

    ``v_first`` and ``v_second`` are the decomposition values; they are None
    when the boundary rule decided the comparison without valuing both sides.
    """

    ordering: str
    v_first: float | None = None
    v_second: float | None = None


def value(spec: GroupSpec, x, R) -> float:
    """The value of ``x`` against reference ``R`` (the scalar that orders bundles)."""
    return decompose(spec, x, R).v


def _nonnegative(x, l: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != l:
        raise BadShape(f"expected a length-{l} vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NegativeCoordinate("bundle has non-finite coordinates")
    if np.any(arr < 0.0):
        raise NegativeCoordinate("compared bundles must be nonnegative")
    return arr


def prefer(spec: GroupSpec, x, y, R) -> PreferenceVerdict:
    """Compare two nonnegative bundles against the interior reference ``R``.

    Interior bundles are compared by value with relative tolerance REL_TOL.
    If exactly one bundle is interior it wins; two boundary bundles raise
    BothBoundary since no rule ranks them.
    """
    xa = _nonnegative(x, spec.l)
    ya = _nonnegative(y, spec.l)
    x_interior = bool(np.all(xa > 0.0))
    y_interior = bool(np.all(ya > 0.0))
    if not x_interior and not y_interior:
        raise BothBoundary("both bundles lie on the boundary; no ordering applies")
    if x_interior and not y_interior:
        return PreferenceVerdict(FIRST_PREFERRED)
    if y_interior and not x_interior:
        return PreferenceVerdict(SECOND_PREFERRED)

    vx = value(spec, xa, R)
    vy = value(spec, ya, R)
    if abs(vx - vy) <= REL_TOL * max(vx, vy):
        ordering = INDIFFERENT
    elif vx > vy:
        ordering = FIRST_PREFERRED
    else:
        ordering = SECOND_PREFERRED
    return PreferenceVerdict(ordering, v_first=vx, v_second=vy)


def indifferent(spec: GroupSpec, x, y) -> bool:
    """True when two interior bundles share a value, i.e. lie on the same orbit.

    On a value match this also checks the constructive witness: the group
    element taking ``x`` to ``y`` (parameter difference of the two
    decompositions) must actually map ``x`` onto ``y`` to REL_TOL relative.
    """
    unit = np.ones(spec.l)
    d_x = decompose(spec, x, unit)
    d_y = decompose(spec, y, unit)
    if abs(d_x.v - d_y.v) > REL_TOL * max(d_x.v, d_y.v):
        return False
    witness = d_y.s.params - d_x.s.params
    mapped = apply(spec, witness, as_bundle(x, spec.l))
    ya = as_bundle(y, spec.l)
    return bool(np.all(np.abs(mapped - ya) <= REL_TOL * np.abs(ya)))
