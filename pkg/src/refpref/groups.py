"""Diagonal exponential matrix groups and their action on the positive orthant.

A group is parametrized by an ``l x (l-1)`` exponent matrix ``A``: the element
with parameter vector ``s`` is the diagonal matrix with entries
``exp(A[i] @ s)``.  Composition is parameter addition, so elements are stored
as parameter vectors and matrices are materialized only for display.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import BadShape, NonPositiveBundle, SingularSystem, SpecMismatch

# Scale-invariant singularity threshold for the log-coordinate system matrix.
DET_TOL = 1e-12


def as_bundle(x, l: int | None = None) -> np.ndarray:
    """Validate ``x`` as a strictly positive commodity bundle.

    Returns a float array.  Raises BadShape for wrong dimensions and
    NonPositiveBundle when any coordinate is nonpositive or non-finite.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise BadShape(f"bundle must be a 1-d vector, got shape {arr.shape}")
    if l is not None and arr.shape[0] != l:
        raise BadShape(f"bundle has {arr.shape[0]} coordinates, expected {l}")
    if not np.all(np.isfinite(arr)):
        raise NonPositiveBundle("bundle has non-finite coordinates")
    if np.any(arr <= 0.0):
        raise NonPositiveBundle("bundle must be strictly positive in every coordinate")
    return arr


def is_interior(x) -> bool:
    """True when every coordinate of ``x`` is finite and strictly positive."""
    arr = np.asarray(x, dtype=float)
    return bool(np.all(np.isfinite(arr)) and np.all(arr > 0.0))


@dataclass(frozen=True, eq=False)
class GroupSpec:
    """A validated diagonal exponential subgroup of GL(l, R).

    Prepending a column of ones to ``exponents`` gives the log-coordinate
    system matrix.  Its invertibility is exactly the condition under which
    every strictly positive bundle factors uniquely as
    ``value * (element @ reference)``; the LU factorization is cached here and
    reused by every solve against this group.

    Attributes
    ----------
    l : int
        Number of commodities (>= 2).  The group has dimension ``l - 1``.
    exponents : ndarray, shape (l, l-1)
        Row ``i`` holds the exponents governing coordinate ``i``.  Read-only.
    coercive : bool or None
        Whether the sum of the diagonal entries attains a minimum over the
        group (required for a demand function to exist).  Exact for ``l == 2``;
        for larger ``l`` only sufficient tests run at validation time and
        ``None`` means undecided, settled by the solver's divergence guards.
    """

    l: int
    exponents: np.ndarray
    coercive: bool | None
    _lu: tuple = field(repr=False)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupSpec)
            and self.l == other.l
            and np.array_equal(self.exponents, other.exponents)
        )

    def __hash__(self) -> int:
        return hash((self.l, self.exponents.tobytes()))

    @property
    def dim(self) -> int:
        """Group dimension (number of parameters)."""
        return self.l - 1

    def system_matrix(self) -> np.ndarray:
        """The log-coordinate system matrix: a ones column prepended to the exponents."""
        return np.column_stack([np.ones(self.l), self.exponents])

    def solve_log_system(self, rhs: np.ndarray) -> np.ndarray:
        """Solve ``system_matrix() @ (log v, s) = rhs`` with the cached factorization.

        ``rhs`` may be a vector or a matrix of stacked right-hand-side columns.
        """
        return lu_solve(self._lu, np.asarray(rhs, dtype=float))


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A group element stored as its parameter vector in R^(l-1)."""

    spec: GroupSpec
    params: np.ndarray

    def __post_init__(self):
        p = np.array(self.params, dtype=float).reshape(-1)
        if p.shape != (self.spec.l - 1,):
            raise BadShape(
                f"parameter vector has {p.shape[0]} entries, expected {self.spec.l - 1}"
            )
        if not np.all(np.isfinite(p)):
            raise BadShape("parameter vector has non-finite entries")
        p.setflags(write=False)
        object.__setattr__(self, "params", p)

    def diagonal(self) -> np.ndarray:
        """Diagonal entries of the materialized matrix: ``exp(exponents @ params)``."""
        d = np.exp(self.spec.exponents @ self.params)
        assert np.all(d > 0.0), "materialized diagonal must stay strictly positive"
        return d

    def matrix(self) -> np.ndarray:
        """Materialize the full diagonal matrix (display only; never used to compose)."""
        return np.diag(self.diagonal())


def _coercivity_advisory(A: np.ndarray) -> bool | None:
    """Cheap validation-time test of whether the exponential sum attains its minimum.

    Exact for two commodities (single parameter): the two exponents must have
    strictly opposite signs.  For more commodities two partial tests run: a
    sign-uniform exponent column certifies non-coercivity, and rows summing to
    zero certify coercivity; otherwise the answer is ``None`` (undecided).
    """
    l, d = A.shape
    if l == 2:
        return bool(A[0, 0] * A[1, 0] < 0.0)
    col_max = A.max(axis=0)
    col_min = A.min(axis=0)
    if np.any((col_max <= 0.0) & (col_min < 0.0)) or np.any((col_min >= 0.0) & (col_max > 0.0)):
        return False  # some axis direction decreases every exponent
    row_sum = np.abs(A.sum(axis=0)).max()
    if row_sum <= 1e-9 * max(1.0, np.abs(A).max()):
        return True  # zero is the mean of the rows, hence interior to their hull
    return None


def validate_group(l: int, exponents) -> GroupSpec:
    """Build a validated group from its exponent matrix.

    Parameters
    ----------
    l : int
        Number of commodities, at least 2.
    exponents : array_like, shape (l, l-1)
        Row ``i`` holds the exponents governing coordinate ``i``.

    Returns
    -------
    GroupSpec

    Raises
    ------
    BadShape
        Wrong dimensions or non-finite entries.
    SingularSystem
        The ones-prepended exponent matrix is numerically singular (scaled
        absolute determinant at or below 1e-12), so decomposition values are
        not unique.
    """
    if not isinstance(l, (int, np.integer)) or l < 2:
        raise BadShape(f"need an integer commodity count >= 2, got {l!r}")
    A = np.array(exponents, dtype=float)
    if A.ndim == 1 and l == 2:
        A = A.reshape(2, 1)
    if A.shape != (l, l - 1):
        raise BadShape(f"exponent matrix must be {l}x{l - 1}, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise BadShape("exponent matrix has non-finite entries")

    B = np.column_stack([np.ones(l), A])
    row_norms = np.linalg.norm(B, axis=1)
    scaled_det = abs(np.linalg.det(B / row_norms[:, None]))
    if scaled_det <= DET_TOL:
        raise SingularSystem(
            f"ones-prepended exponent matrix is singular (scaled |det| = {scaled_det:.3e}); "
            "bundles do not decompose uniquely under this group"
        )

    A.setflags(write=False)
    return GroupSpec(
        l=int(l),
        exponents=A,
        coercive=_coercivity_advisory(A),
        _lu=lu_factor(B),
    )


def _params_of(spec: GroupSpec, s) -> np.ndarray:
    """Parameter vector of ``s``, which may be a GroupElement or an array."""
    if isinstance(s, GroupElement):
        if s.spec != spec:
            raise SpecMismatch("group element belongs to a different group")
        return s.params
    p = np.asarray(s, dtype=float).reshape(-1)
    if p.shape != (spec.l - 1,):
        raise BadShape(f"parameter vector has {p.shape[0]} entries, expected {spec.l - 1}")
    return p


def apply(spec: GroupSpec, s, x) -> np.ndarray:
    """Act on bundle ``x``: coordinate ``i`` is scaled by ``exp(exponents[i] @ s)``.

    ``s`` may be a GroupElement of ``spec`` or a bare parameter vector.  The
    result is again strictly positive.
    """
    params = _params_of(spec, s)
    xb = as_bundle(x, spec.l)
    return xb * np.exp(spec.exponents @ params)


def identity(spec: GroupSpec) -> GroupElement:
    """The identity element (zero parameter vector)."""
    return GroupElement(spec, np.zeros(spec.l - 1))


def compose(s1: GroupElement, s2: GroupElement) -> GroupElement:
    """Group law: the element acting as ``s1`` after ``s2`` (parameter addition)."""
    if not isinstance(s1, GroupElement) or not isinstance(s2, GroupElement):
        raise SpecMismatch("compose expects two GroupElement values")
    if s1.spec != s2.spec:
        raise SpecMismatch("cannot compose elements of different groups")
    return GroupElement(s1.spec, s1.params + s2.params)


def inverse(s: GroupElement) -> GroupElement:
    """The inverse element (parameter negation)."""
    return GroupElement(s.spec, -s.params)
