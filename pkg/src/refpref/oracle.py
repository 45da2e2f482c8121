"""Brute-force verifiers: exhaustive grid minimization and budget-plane sampling.

These exist to cross-check the analytic and Newton-based paths by entirely
independent means, and deliberately share no solver code with them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadShape, BoxTooLarge
from .groups import GroupSpec, as_bundle
from .demand import as_prices

DEFAULT_BOX = 10.0
# Points per scan stage when no resolution is requested; keeps runtime near a
# second for up to three parameters.
DEFAULT_BUDGET = int(1e7)
HARD_POINT_LIMIT = int(1e8)


@dataclass(frozen=True)
class GridMinResult:
    """Best grid point, its objective value, and a curvature-based error bound.

    ``value - bound <= true_minimum <= value`` whenever the true minimizer
    lies inside the scanned box (grid values never undershoot the true
    minimum; the bound covers the distance to the nearest grid point with a
    conservative safety factor on the local curvature).
    """

    s: np.ndarray
    value: float
    bound: float


def _box_bounds(box, d: int) -> tuple[np.ndarray, np.ndarray]:
    if box is None:
        half = float(DEFAULT_BOX)
        return np.full(d, -half), np.full(d, half)
    if np.isscalar(box):
        half = float(box)
        if half <= 0.0:
            raise BadShape("box half-width must be positive")
        return np.full(d, -half), np.full(d, half)
    lo, hi = box
    lo, hi = float(lo), float(hi)
    if hi <= lo:
        raise BadShape("box upper bound must exceed the lower bound")
    return np.full(d, lo), np.full(d, hi)


def _axes(lo: np.ndarray, hi: np.ndarray, resolution) -> list[np.ndarray]:
    d = lo.shape[0]
    if resolution is not None:
        res = float(resolution)
        if res <= 0.0:
            raise BadShape("resolution must be positive")
        counts = np.floor((hi - lo) / res).astype(int) + 1
        total = float(np.prod(counts.astype(float)))
        if total > HARD_POINT_LIMIT:
            raise BoxTooLarge(
                f"grid would hold {total:.3g} points (limit {HARD_POINT_LIMIT:.0e}); "
                "coarsen the resolution or shrink the box"
            )
        return [lo[k] + res * np.arange(counts[k]) for k in range(d)]
    per_dim = max(2, int(round(DEFAULT_BUDGET ** (1.0 / d))))
    return [np.linspace(lo[k], hi[k], per_dim) for k in range(d)]


def _scan(A: np.ndarray, w: np.ndarray, axes: list[np.ndarray]):
    """Exhaustively evaluate the weighted exponential sum on the grid; return the min.

    Per-axis exponential tables turn the evaluation into small matrix
    products, slab by slab along the first axis for three parameters.
    """
    d = len(axes)
    with np.errstate(over="ignore"):
        tables = [np.exp(np.outer(A[:, k], axes[k])) for k in range(d)]
        if d == 1:
            vals = w @ tables[0]
            j = int(np.argmin(vals))
            return np.array([axes[0][j]]), float(vals[j])
        if d == 2:
            vals = (tables[0] * w[:, None]).T @ tables[1]
            j, k = np.unravel_index(int(np.argmin(vals)), vals.shape)
            return np.array([axes[0][j], axes[1][k]]), float(vals[j, k])
        if d == 3:
            best_val = np.inf
            best_idx = (0, 0, 0)
            for j in range(axes[0].shape[0]):
                wj = w * tables[0][:, j]
                vals = (tables[1] * wj[:, None]).T @ tables[2]
                k, m = np.unravel_index(int(np.argmin(vals)), vals.shape)
                if vals[k, m] < best_val:
                    best_val = float(vals[k, m])
                    best_idx = (j, k, m)
            j, k, m = best_idx
            return np.array([axes[0][j], axes[1][k], axes[2][m]]), best_val
    raise BadShape("grid oracle supports at most three group parameters (four commodities)")


def _error_bound(A: np.ndarray, w: np.ndarray, s: np.ndarray, step: float) -> float:
    """Conservative bound on value-above-true-minimum for grid spacing ``step``.

    Locally the objective is quadratic with curvature at most the largest
    Hessian eigenvalue; the nearest grid point to the true minimizer is within
    half a cell diagonal.  A factor of four absorbs curvature variation.
    """
    u = w * np.exp(A @ s)
    H = (A * u[:, None]).T @ A
    lam = float(np.linalg.eigvalsh(H)[-1])
    r = 0.5 * step * np.sqrt(A.shape[1])
    return 2.0 * lam * r * r + 1e-12 * float(u.sum())


def grid_min(spec: GroupSpec, weights, box=None, resolution=None, refine=True) -> GridMinResult:
    """Minimize ``sum_i weights_i exp(a_i @ s)`` by exhaustive grid search.

    Parameters
    ----------
    weights : array_like
        Strictly positive weights, one per commodity (all ones probes the
        minimizing element; ``p * R`` probes a demand instance).
    box : None, float, or (float, float)
        Parameter bounds per dimension; default [-10, 10].
    resolution : float, optional
        Grid step.  When omitted the step is chosen so a stage holds at most
        ~1e7 points.  Requesting more than 1e8 points raises BoxTooLarge.
    refine : bool
        Re-scan once around the best cell with the same point budget.
    """
    A = spec.exponents
    if spec.l > 4:
        raise BadShape("grid oracle supports at most four commodities")
    w = np.asarray(weights, dtype=float)
    if w.shape != (spec.l,):
        raise BadShape(f"weights must have length {spec.l}, got shape {w.shape}")
    if not np.all(np.isfinite(w)) or np.any(w <= 0.0):
        raise BadShape("weights must be strictly positive and finite")

    lo, hi = _box_bounds(box, spec.dim)
    axes = _axes(lo, hi, resolution)
    s_best, v_best = _scan(A, w, axes)
    step = max(float(ax[1] - ax[0]) for ax in axes)

    if refine:
        per_dim = [ax.shape[0] for ax in axes]
        lo2 = np.maximum(lo, s_best - 3.0 * step)
        hi2 = np.minimum(hi, s_best + 3.0 * step)
        axes2 = [np.linspace(lo2[k], hi2[k], per_dim[k]) for k in range(spec.dim)]
        s2, v2 = _scan(A, w, axes2)
        if v2 <= v_best:
            s_best, v_best = s2, v2
        step = max(float(ax[1] - ax[0]) for ax in axes2)

    return GridMinResult(s=s_best, value=v_best, bound=_error_bound(A, w, s_best, step))


def budget_sampler_check(
    spec: GroupSpec, p, w: float, R, v_claimed: float, samples: int = 100_000, seed: int = 0
) -> bool:
    """Sample bundles on the budget plane; True when none beats the claimed value.

    Draws log-uniform positive directions and rescales each onto the plane
    ``<p, x> = w``, then values every sample against ``R``.  Returns True iff
    no sampled value exceeds ``v_claimed * (1 + 1e-9)``.
    """
    if samples < 10_000:
        raise ValueError("budget sampling needs at least 1e4 samples to be meaningful")
    pa = as_prices(p, spec.l)
    Rb = as_bundle(R, spec.l)
    w = float(w)
    if w <= 0.0:
        raise BadShape("budget must be positive")

    rng = np.random.default_rng(seed)
    U = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), size=(samples, spec.l)))
    X = (w / (U @ pa))[:, None] * U  # every row spends the budget exactly
    log_v = spec.solve_log_system((np.log(X) - np.log(Rb)).T)[0]
    return bool(np.all(np.exp(log_v) <= v_claimed * (1.0 + 1e-9)))
