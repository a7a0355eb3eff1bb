"""Orlicz (Luxemburg-normalized) averages over cubes and the associated
maximal function.

The average of ``f`` over ``Q`` under a gauge ``phi`` is the infimal
``lam > 0`` with ``mean over Q of phi(|f|/lam) <= 1``.  The defining mean is
continuous and strictly decreasing in ``lam`` wherever it is positive, so
bisection between certified brackets converges unconditionally; the
returned value always sits on the feasible side of the constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .grid import Cube, DyadicGrid, SampledFunction
from .young import YoungFunction, inverse

__all__ = [
    "OrliczAverage",
    "luxemburg",
    "orlicz_average",
    "orlicz_maximal",
    "orlicz_maximal_function",
    "maximal_lp_norm_ratio",
]

_RTOL = 2e-10


@dataclass(frozen=True)
class OrliczAverage:
    """Result record: the average, where it was taken, and the solver cost."""

    value: float
    cube: Optional[Cube]
    gauge: YoungFunction
    iterations: int


def luxemburg(phi: YoungFunction, samples, rtol: float = _RTOL) -> tuple:
    """Luxemburg functional of a bare sample block: ``(value, iterations)``.

    Returns 0 for an identically zero block (the constraint then holds for
    every positive ``lam`` and the infimum is 0).
    """
    a = np.abs(np.asarray(samples, dtype=float))
    mx = float(a.max()) if a.size else 0.0
    if mx == 0.0:
        return 0.0, 0
    n = a.size

    def g(lam: float) -> float:
        with np.errstate(over="ignore"):
            return float(np.mean(phi.evaluate(a / lam)))

    # g(mx / inv(1)) <= 1 and g(mx / inv(n)) >= 1 by monotonicity of phi;
    # the small factors absorb the inverse solver tolerance.
    hi = mx / inverse(phi, 1.0) * (1.0 + 1e-6)
    lo = mx / inverse(phi, float(n)) * (1.0 - 1e-6)
    if g(hi) > 1.0:
        hi *= 2.0
    iterations = 0
    for _ in range(200):
        iterations += 1
        mid = 0.5 * (lo + hi)
        if g(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if g(hi) >= 1.0 - rtol or (hi - lo) <= 1e-13 * hi:
            break
    return hi, iterations


def orlicz_average(phi: YoungFunction, f: SampledFunction, Q: Cube) -> OrliczAverage:
    """Orlicz average of ``f`` over the cube ``Q`` under the gauge ``phi``."""
    value, iterations = luxemburg(phi, f.restrict(Q))
    return OrliczAverage(value=value, cube=Q, gauge=phi, iterations=iterations)


def orlicz_maximal(phi: YoungFunction, f: SampledFunction, grid: DyadicGrid, x: float) -> float:
    """Maximal Orlicz average over the grid cubes containing ``x``."""
    x0, x1 = f.domain
    if not (x0 <= x < x1):
        raise DomainError(f"x = {x} outside the domain [{x0}, {x1})")
    best = 0.0
    for Q in grid.cubes_containing(x):
        val, _ = luxemburg(phi, f.restrict(Q))
        if val > best:
            best = val
    return best


def orlicz_maximal_function(
    phi: YoungFunction, f: SampledFunction, grid: DyadicGrid
) -> SampledFunction:
    """The maximal function sampled on ``f``'s own lattice.

    One Luxemburg solve per cube; each cube then pushes its value onto the
    samples it covers with a running pointwise max.
    """
    out = np.zeros(f.n)
    for Q in grid.cubes():
        val, _ = luxemburg(phi, f.restrict(Q))
        i0, i1 = f.index_range(Q)
        np.maximum(out[i0:i1], val, out=out[i0:i1])
    return f.with_values(out)


def maximal_lp_norm_ratio(
    phi: YoungFunction, p: float, f: SampledFunction, grid: DyadicGrid
) -> float:
    """``||M_phi f||_p / ||f||_p`` on the sampled domain.

    A lower bound for the operator norm of the maximal function; its growth
    or stability under refinement illustrates the integrability dichotomy
    of the gauge.
    """
    denom = f.lp_norm(p)
    if denom == 0.0:
        raise DomainError("maximal_lp_norm_ratio needs a nonzero function")
    M = orlicz_maximal_function(phi, f, grid)
    return M.lp_norm(p) / denom
