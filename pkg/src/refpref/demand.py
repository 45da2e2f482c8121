"""Consumer demand under referential preferences.

The consumer maximizes the value of a bundle subject to spending the budget
exactly.  Writing the bundle as ``v * (element(s) @ R)`` turns the constraint
into ``v * h(s) = w`` with ``h(s) = sum_i p_i R_i exp(a_i @ s)``, so maximal
value means minimal ``h``: a smooth, strictly convex sum of exponentials of
affine forms.  Two independent routes compute the optimum:

* ``demand_direct`` runs a damped Newton minimization of ``h`` from ``s = 0``;
* ``demand_closed_form`` uses the minimizing group element of the unweighted
  sum (``find_min_matrix``) and the price decomposition, and never sees the
  reference vector at all.

Their agreement for every interior reference is the library's central
invariant: the demanded bundle does not depend on the reference.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import Decomposition, decompose
from .errors import BadShape, NonPositivePrice, NotCoercive, ZeroWealth
from .groups import GroupElement, GroupSpec, as_bundle, identity

# Declared convergence threshold on the gradient infinity norm (scaled by the
# objective when it is large); the solver polishes past it while iterations
# remain since the quadratic tail is nearly free.
GRAD_TOL = 1e-10
_POLISH_TOL = 1e-12
MAX_ITERS = 100
# A parameter this large means Newton is riding a descent ray to infinity.
_DIVERGENCE_NORM = 1e3


@dataclass(frozen=True)
class MinMatrixResult:
    """Minimizer of the unweighted exponential sum ``g(s) = sum_i exp(a_i @ s)``.

    ``g_min`` is the minimal sum of the element's diagonal entries; ``s_bar``
    is the unique minimizing element (unique because the exponent rows span
    parameter space, making ``g`` strictly convex).
    """

    s_bar: GroupElement
    g_min: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class DemandResult:
    """Optimal bundle for one consumer at given prices and wealth.

    ``v_max`` and ``s_star`` are reported against the reference used in the
    computation (the unit reference for the closed form unless one is given);
    ``x_star`` itself is reference-free.
    """

    x_star: np.ndarray
    v_max: float
    s_star: GroupElement
    budget_spent: float


def as_prices(p, l: int) -> np.ndarray:
    """Validate ``p`` as a strictly positive price vector."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != l:
        raise BadShape(f"price vector must have length {l}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise NonPositivePrice("prices must be strictly positive and finite")
    return arr


def _wealth(p: np.ndarray, w, endowment) -> float:
    """Resolve the budget from either a wealth number or an endowment vector."""
    if (w is None) == (endowment is None):
        raise TypeError("provide exactly one of a budget and an endowment")
    if endowment is not None:
        e = np.asarray(endowment, dtype=float)
        if e.shape != p.shape:
            raise BadShape(f"endowment must have length {p.shape[0]}, got shape {e.shape}")
        if not np.all(np.isfinite(e)) or np.any(e < 0.0):
            raise BadShape("endowment must be nonnegative and finite")
        w = float(p @ e)
    w = float(w)
    if not np.isfinite(w) or w <= 0.0:
        raise ZeroWealth(f"wealth must be positive, got {w}")
    return w


def _minimize_exp_sum(A: np.ndarray, weights: np.ndarray):
    """Damped Newton minimization of ``f(s) = sum_i weights_i exp(A[i] @ s)`` from s = 0.

    ``f`` is smooth and strictly convex (positive weights; exponent rows span
    parameter space), so when a minimizer exists Newton with backtracking
    converges to it.  Divergence guards raise NotCoercive instead of looping:
    the parameter norm exceeding 1e3, or the objective draining twelve orders
    of magnitude below its start while the gradient stays proportionally
    large (a minimum flattens the relative gradient; a drain does not).

    Weights are normalized to unit sum internally (the minimizer is
    unchanged), so thresholds are relative to the starting value.

    Returns ``(s, f_min, iterations, converged)``.
    """
    total = float(np.sum(weights))
    log_w = np.log(np.asarray(weights, dtype=float) / total)
    d = A.shape[1]
    s = np.zeros(d)

    def terms(sv):
        with np.errstate(over="ignore"):
            return np.exp(log_w + A @ sv)

    u = terms(s)
    f = float(u.sum())
    grad = A.T @ u
    iters = 0
    while True:
        gnorm = float(np.abs(grad).max())
        # Gradient scales with f, so convergence is judged relative to it; a
        # drain toward zero keeps the relative gradient large and never
        # "converges" here, which lets the guards below catch it.
        if gnorm <= _POLISH_TOL * f or iters >= MAX_ITERS:
            break

        H = (A * u[:, None]).T @ A
        try:
            step = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            step = -grad / max(gnorm, 1.0)
        if grad @ step >= 0.0:
            step = -grad / max(gnorm, 1.0)

        alpha = 1.0
        accepted = False
        while alpha > 1e-14:
            s_try = s + alpha * step
            u_try = terms(s_try)
            f_try = float(u_try.sum())
            if np.isfinite(f_try) and f_try < f:
                accepted = True
                break
            # Near the minimum f is flat to rounding; accept a full Newton
            # step that leaves f unchanged but clearly shrinks the gradient.
            if alpha == 1.0 and np.isfinite(f_try) and f_try <= f * (1.0 + 1e-12):
                if float(np.abs(A.T @ u_try).max()) < 0.5 * gnorm:
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            break  # no representable progress left; gradient check decides below

        s, u, f = s_try, u_try, f_try
        grad = A.T @ u
        iters += 1

        if np.abs(s).max() > _DIVERGENCE_NORM:
            raise NotCoercive(
                "minimization diverged (parameter norm exceeded 1e3): "
                "the exponential sum has no minimizer for this group"
            )
        if f < 1e-12 and float(np.abs(grad).max()) > 1e-8 * f:
            raise NotCoercive(
                "objective drains toward zero without a stationary point: "
                "the exponential sum has no minimizer for this group"
            )

    gnorm = float(np.abs(grad).max())
    converged = gnorm <= GRAD_TOL * f
    return s, f * total, iters, converged


# Immutable-after-write memo of minimizing elements, keyed by group.  A cache
# miss recomputes a value identical to any concurrent writer's, so racing
# setdefault calls are harmless.
_MIN_MATRIX_CACHE: dict[GroupSpec, MinMatrixResult] = {}


def find_min_matrix(spec: GroupSpec) -> MinMatrixResult:
    """The unique group element minimizing the sum of its diagonal entries.

    Raises NotCoercive when no minimizer exists (validation-time precheck for
    two commodities, runtime divergence guards otherwise).  Results are
    memoized per group.
    """
    cached = _MIN_MATRIX_CACHE.get(spec)
    if cached is not None:
        return cached
    if spec.coercive is False:
        raise NotCoercive(
            "this group's exponential sum has no minimizer (known at validation time)"
        )
    s, f, iters, converged = _minimize_exp_sum(spec.exponents, np.ones(spec.l))
    # With unit weights a genuine minimizer keeps every exponent below log(l),
    # so a stationary point found far from the origin is an infimum chased
    # toward infinity, not a minimum (conservative, like the other guards).
    if np.abs(s).max() > 100.0:
        raise NotCoercive(
            "apparent minimizer lies unreasonably far out; treating the group as "
            "having no minimizing element"
        )
    result = MinMatrixResult(
        s_bar=GroupElement(spec, s),
        g_min=float(f),
        iterations=iters,
        converged=converged,
    )
    return _MIN_MATRIX_CACHE.setdefault(spec, result)


def demand_direct(spec: GroupSpec, p, w=None, R=None, *, endowment=None) -> DemandResult:
    """Demand by direct convex minimization of the budget factor ``h``.

    Parameters
    ----------
    p : array_like
        Strictly positive prices.
    w : float, optional
        Budget.  Exactly one of ``w`` and ``endowment`` must be given; with an
        endowment the budget is its value at ``p``.
    R : array_like
        Interior reference vector (required).
    endowment : array_like, optional
        Nonnegative endowment vector.

    Raises NotCoercive when the group admits no demand function.
    """
    pa = as_prices(p, spec.l)
    if R is None:
        raise BadShape("a reference vector is required")
    Rb = as_bundle(R, spec.l)
    wealth = _wealth(pa, w, endowment)
    if spec.coercive is False:
        raise NotCoercive("no demand function exists for this group")

    s, h_min, _iters, converged = _minimize_exp_sum(spec.exponents, pa * Rb)
    if not converged:
        raise NotCoercive(
            "budget-factor minimization found no stationary point within the iteration "
            "cap; the group is likely not coercive"
        )
    v_max = wealth / h_min
    x_star = v_max * Rb * np.exp(spec.exponents @ s)
    return DemandResult(
        x_star=x_star,
        v_max=float(v_max),
        s_star=GroupElement(spec, s),
        budget_spent=float(pa @ x_star),
    )


def demand_closed_form(spec: GroupSpec, p, e=None, *, wealth=None, R=None) -> DemandResult:
    """Demand from the minimizing element: ``x_i = (wealth / g_min) * m_i / p_i``.

    ``m`` is the diagonal of the minimizing element.  The bundle depends only
    on prices and wealth, never on a reference.  ``v_max`` and ``s_star`` are
    reported against ``R`` when given (unit reference otherwise) via the value
    decompositions of the price vector and the reference.
    """
    pa = as_prices(p, spec.l)
    w = _wealth(pa, wealth, e)
    mm = find_min_matrix(spec)
    if not mm.converged:
        raise NotCoercive("minimizing element is unreliable: solver did not converge")

    m = np.exp(spec.exponents @ mm.s_bar.params)
    x_star = (w / mm.g_min) * m / pa

    unit = np.ones(spec.l)
    d_p = decompose(spec, pa, unit)
    if R is None:
        d_r = Decomposition(v=1.0, s=identity(spec))
    else:
        d_r = decompose(spec, R, unit)
    v_max = w / (d_p.v * d_r.v * mm.g_min)
    s_star = mm.s_bar.params - d_p.s.params - d_r.s.params
    return DemandResult(
        x_star=x_star,
        v_max=float(v_max),
        s_star=GroupElement(spec, s_star),
        budget_spent=float(pa @ x_star),
    )


def satisfaction(spec: GroupSpec, p, w, R) -> float:
    """Maximal attainable value at prices ``p`` and budget ``w`` against reference ``R``.

    Scales inversely with the reference's own value: inflating the reference
    deflates reported satisfaction while leaving the chosen bundle unchanged.
    """
    return demand_direct(spec, p, w, R).v_max


def decompose_price(spec: GroupSpec, p) -> Decomposition:
    """Decompose the price vector against the unit reference (prices live in the orthant)."""
    pa = as_prices(p, spec.l)
    return decompose(spec, pa, np.ones(spec.l))
