"""Mean oscillation, generalized oscillation seminorms, exponential
integrability scans, and the root-of-BMO comparison.

All suprema run over the finite dyadic family of a grid, so every seminorm
is a certified lower bound of the true supremum over all cubes; reports
carry the attaining cube so callers can drive refinement where it matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .grid import Cube, DyadicGrid, SampledFunction, average
from .orlicz import luxemburg
from .young import ExpMinusOne, YoungFunction

__all__ = [
    "OscReport",
    "JNReport",
    "RootBmoReport",
    "mean_oscillation",
    "bmo_seminorm",
    "osc_seminorm",
    "john_nirenberg_scan",
    "root_bmo_check",
]


@dataclass(frozen=True)
class OscReport:
    seminorm: float
    attaining_cube: Optional[Cube]
    gauge: Optional[YoungFunction]
    per_cube: Optional[tuple] = None  # ((cube, value), ...) when requested

    def as_dict(self):
        d = {
            "seminorm": self.seminorm,
            "attaining_cube": self.attaining_cube.as_list() if self.attaining_cube else None,
        }
        if self.gauge is not None:
            d["gauge"] = self.gauge.to_dict()
        if self.per_cube is not None:
            d["per_cube"] = [[Q.as_list(), v] for Q, v in self.per_cube]
        return d


def mean_oscillation(b: SampledFunction, Q: Cube) -> float:
    """Average of ``|b - mean_Q(b)|`` over ``Q``."""
    vals = b.restrict(Q)
    return float(np.mean(np.abs(vals - vals.mean())))


def bmo_seminorm(b: SampledFunction, grid: DyadicGrid, keep_table: bool = False) -> OscReport:
    """Supremum of the mean oscillation over the grid cubes."""
    best, best_cube = 0.0, None
    table = [] if keep_table else None
    for Q in grid.cubes():
        val = mean_oscillation(b, Q)
        if table is not None:
            table.append((Q, val))
        if val > best:
            best, best_cube = val, Q
    return OscReport(best, best_cube, None, tuple(table) if table is not None else None)


def osc_seminorm(
    phi: YoungFunction, b: SampledFunction, grid: DyadicGrid, keep_table: bool = False
) -> OscReport:
    """Supremum over cubes of the Orlicz average of ``b - mean_Q(b)``."""
    best, best_cube = 0.0, None
    table = [] if keep_table else None
    for Q in grid.cubes():
        vals = b.restrict(Q)
        val, _ = luxemburg(phi, vals - vals.mean())
        if table is not None:
            table.append((Q, val))
        if val > best:
            best, best_cube = val, Q
    return OscReport(best, best_cube, phi, tuple(table) if table is not None else None)


@dataclass(frozen=True)
class JNReport:
    c_star: float
    infinite: bool
    C_target: float
    attaining_cube: Optional[Cube]

    def as_dict(self):
        return {
            "c_star": None if self.infinite else self.c_star,
            "infinite": self.infinite,
            "C_target": self.C_target,
            "attaining_cube": self.attaining_cube.as_list() if self.attaining_cube else None,
        }


def john_nirenberg_scan(b: SampledFunction, grid: DyadicGrid, C_target: float) -> JNReport:
    """Largest ``c`` with ``mean_Q exp(c |b - b_Q|) <= C_target`` for every cube.

    Per cube the mean is increasing in ``c``, so the threshold is found by
    bisection and the scan takes the minimum across cubes.  A symbol that
    is constant on every cube has no finite threshold; that degenerate case
    comes back flagged ``infinite``.
    """
    if C_target <= 1.0:
        raise DomainError("C_target must exceed 1 (the mean at c = 0 is 1)")
    best = math.inf
    best_cube = None
    for Q in grid.cubes():
        vals = b.restrict(Q)
        dev = np.abs(vals - vals.mean())
        if dev.max() <= 1e-15:
            continue

        def F(c: float) -> float:
            with np.errstate(over="ignore"):
                return float(np.mean(np.exp(c * dev)))

        hi = 1.0
        while F(hi) < C_target:
            hi *= 2.0
            if hi > 1e300:
                break
        lo = 0.0
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if F(mid) <= C_target:
                lo = mid
            else:
                hi = mid
        if lo < best:
            best = lo
            best_cube = Q
    return JNReport(
        c_star=best,
        infinite=math.isinf(best),
        C_target=C_target,
        attaining_cube=best_cube,
    )


@dataclass(frozen=True)
class RootBmoReport:
    """Both sides of the root comparison plus the per-cube chain check.

    ``chain_ok`` certifies, cube by cube, that the average distance from
    ``b`` to the a-th root of the averaged power never exceeds the power's
    oscillation to the 1/a: both steps are exact sample algebra (pointwise
    Hoelder continuity of the root, then the power-mean inequality).
    """

    a: float
    bmo_power: float
    osc_exp: float
    ratio: float
    chain_ok: bool
    chain_margin: float
    attaining_cube: Optional[Cube]

    def as_dict(self):
        return {
            "a": self.a,
            "bmo_power": self.bmo_power,
            "osc_exp": self.osc_exp,
            "ratio": self.ratio,
            "chain_ok": self.chain_ok,
            "chain_margin": self.chain_margin,
            "attaining_cube": self.attaining_cube.as_list() if self.attaining_cube else None,
        }


def root_bmo_check(b: SampledFunction, a: float, grid: DyadicGrid) -> RootBmoReport:
    """Compare the exponential-gauge oscillation of ``b`` against the
    mean oscillation of ``b**a`` raised to ``1/a``.

    The symbol is rescaled so the power has unit mean oscillation before
    the Luxemburg solves (the comparison is restored by homogeneity), which
    keeps every bisection bracket O(1).
    """
    if a <= 1.0:
        raise DomainError("root comparison needs a > 1")
    if np.any(b.values < 0):
        raise DomainError("root comparison needs b >= 0")
    b_pow = b.power(a)
    bmo_pow = bmo_seminorm(b_pow, grid)
    s = bmo_pow.seminorm
    if s == 0.0:
        return RootBmoReport(a, 0.0, 0.0, 0.0, True, math.inf, None)

    scale = s ** (1.0 / a)
    b_normalized = b * (1.0 / scale)
    osc_n = osc_seminorm(ExpMinusOne(a), b_normalized, grid)
    osc = osc_n.seminorm * scale

    # chain: mean_Q |b - (mean_Q b^a)^(1/a)|  <=  (mean_Q |b^a - (b^a)_Q|)^(1/a)
    #        <= bmo(b^a)^(1/a), checked with a relative epsilon per cube
    worst = math.inf
    ok = True
    for Q in grid.cubes():
        pow_vals = b_pow.restrict(Q)
        root_of_mean = pow_vals.mean() ** (1.0 / a)
        lhs = float(np.mean(np.abs(b.restrict(Q) - root_of_mean)))
        mid = float(np.mean(np.abs(pow_vals - pow_vals.mean()))) ** (1.0 / a)
        rhs = scale
        tol = 1e-12 * (1.0 + rhs)
        if lhs > mid + tol or mid > rhs + tol:
            ok = False
        worst = min(worst, min(mid - lhs, rhs - mid))
    return RootBmoReport(
        a=a,
        bmo_power=s,
        osc_exp=osc,
        ratio=osc / scale,
        chain_ok=ok,
        chain_margin=worst,
        attaining_cube=osc_n.attaining_cube,
    )
