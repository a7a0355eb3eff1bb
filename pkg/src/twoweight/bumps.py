"""Weight-pair functionals: Muckenhoupt constants, two-weight joint
constants, Orlicz bump constants with the symbol folded in, separated
log-bump presets, necessity constants, and reverse Hoelder estimation.

Every supremum runs over the finite cube family of a grid and returns the
attaining cube as a witness; ties break toward the first cube in the
deterministic coarse-to-fine, left-to-right order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .grid import Cube, DyadicGrid, SampledFunction, Weight
from .orlicz import luxemburg
from .sparse import SparseFamily, apply_sparse
from .young import (
    LogBump,
    LogLogBump,
    Power,
    YoungFunction,
    bp_tail,
    young_preset,
)

__all__ = [
    "SupReport",
    "BumpReport",
    "NecessityReport",
    "SparseNecessityReport",
    "ReverseHolderReport",
    "ap_constant",
    "two_weight_ap",
    "bump_constant_K",
    "unbumped_expression",
    "separated_log_bump",
    "necessity_constants",
    "sparse_necessity_check",
    "reverse_holder_exponent",
    "ap_chain_check",
    "dual_membership_ok",
    "one_weight_bmo_chain",
    "PRESETS",
]


def _dual(p: float) -> float:
    return p / (p - 1.0)


@dataclass(frozen=True)
class SupReport:
    """A supremum over cubes together with its witness."""

    value: float
    attaining_cube: Optional[Cube]

    def as_dict(self):
        return {
            "value": self.value,
            "attaining_cube": self.attaining_cube.as_list() if self.attaining_cube else None,
        }


def _sup_over_cubes(grid: DyadicGrid, fn) -> SupReport:
    best, cube = -math.inf, None
    for Q in grid.cubes():
        val = fn(Q)
        if val > best:
            best, cube = val, Q
    return SupReport(value=float(best), attaining_cube=cube)


def ap_constant(w: Weight, p: float, grid: DyadicGrid) -> SupReport:
    """One-weight constant ``sup_I mean_I(w) * mean_I(w^(-p'/p))**(p/p')``."""
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    pp = _dual(p)
    w_neg = w.power(-pp / p)

    def per_cube(Q: Cube) -> float:
        return float(np.mean(w.restrict(Q))) * float(np.mean(w_neg.restrict(Q))) ** (p / pp)

    return _sup_over_cubes(grid, per_cube)


def two_weight_ap(u: Weight, v: Weight, p: float, grid: DyadicGrid) -> SupReport:
    """Joint constant ``sup_Q mean_Q(u)**(1/p) * mean_Q(v^(-p'/p))**(1/p')``."""
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    pp = _dual(p)
    sigma = v.power(-pp / p)

    def per_cube(Q: Cube) -> float:
        return float(np.mean(u.restrict(Q))) ** (1.0 / p) * float(
            np.mean(sigma.restrict(Q))
        ) ** (1.0 / pp)

    return _sup_over_cubes(grid, per_cube)


@dataclass(frozen=True)
class BumpReport:
    """Two-term bump constant ``K = term1 + term2`` with per-term witnesses."""

    K: float
    term1: SupReport
    term2: SupReport
    config: dict = field(default_factory=dict)
    warnings: tuple = ()
    per_cube: Optional[tuple] = None  # ((cube, t1, t2), ...) when requested

    def as_dict(self):
        d = {
            "K": self.K,
            "term1": self.term1.as_dict(),
            "term2": self.term2.as_dict(),
            "config": self.config,
            "warnings": list(self.warnings),
        }
        if self.per_cube is not None:
            d["per_cube"] = [[Q.as_list(), t1, t2] for Q, t1, t2 in self.per_cube]
        return d


def bump_constant_K(
    A: YoungFunction,
    B: YoungFunction,
    C: YoungFunction,
    D: YoungFunction,
    b: SampledFunction,
    m: int,
    u: Weight,
    v: Weight,
    p: float,
    grid: DyadicGrid,
    keep_table: bool = False,
) -> BumpReport:
    """Symbol-aware bump constant

    ``sup_Q lux_A(u^(1/p)) lux_B(|b-b_Q|^m v^(-1/p))
      + sup_Q lux_C(|b-b_Q|^m u^(1/p)) lux_D(v^(-1/p))``.

    Odd powers of ``b - b_Q`` are signed, but the Luxemburg functional sees
    absolute values, so the modulus is taken up front.
    """
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    if m < 0:
        raise DomainError("m must be >= 0")
    u_pow = u.power(1.0 / p)
    v_neg = v.power(-1.0 / p)
    best1 = best2 = -math.inf
    cube1 = cube2 = None
    table = [] if keep_table else None
    for Q in grid.cubes():
        bv = b.restrict(Q)
        dev_m = np.abs(bv - bv.mean()) ** m
        uv = u_pow.restrict(Q)
        vv = v_neg.restrict(Q)
        t1 = luxemburg(A, uv)[0] * luxemburg(B, dev_m * vv)[0]
        t2 = luxemburg(C, dev_m * uv)[0] * luxemburg(D, vv)[0]
        if table is not None:
            table.append((Q, float(t1), float(t2)))
        if t1 > best1:
            best1, cube1 = t1, Q
        if t2 > best2:
            best2, cube2 = t2, Q
    term1 = SupReport(float(best1), cube1)
    term2 = SupReport(float(best2), cube2)
    return BumpReport(
        K=term1.value + term2.value,
        term1=term1,
        term2=term2,
        config={
            "p": p,
            "m": m,
            "gauges": {k: g.to_dict() for k, g in zip("ABCD", (A, B, C, D))},
        },
        per_cube=tuple(table) if table is not None else None,
    )


def unbumped_expression(
    b: SampledFunction, m: int, u: Weight, v: Weight, p: float, grid: DyadicGrid
) -> BumpReport:
    """The power-gauge specialization computed by direct power averages,
    independent of the Luxemburg solver:

    ``sup_Q mean(|b-b_Q|^{mp} u)^(1/p) mean(sigma)^(1/p')
      + sup_Q mean(u)^(1/p) mean(|b-b_Q|^{mp'} sigma)^(1/p')``
    with ``sigma = v^(-p'/p)``.
    """
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    pp = _dual(p)
    sigma = v.power(-pp / p)
    best1 = best2 = -math.inf
    cube1 = cube2 = None
    for Q in grid.cubes():
        bv = b.restrict(Q)
        dev = np.abs(bv - bv.mean())
        uv = u.restrict(Q)
        sv = sigma.restrict(Q)
        ta = float(np.mean(dev ** (m * p) * uv)) ** (1.0 / p) * float(np.mean(sv)) ** (1.0 / pp)
        tb = float(np.mean(uv)) ** (1.0 / p) * float(np.mean(dev ** (m * pp) * sv)) ** (1.0 / pp)
        # term order matches the bump constant: u-average term first
        if tb > best1:
            best1, cube1 = tb, Q
        if ta > best2:
            best2, cube2 = ta, Q
    term1 = SupReport(float(best1), cube1)
    term2 = SupReport(float(best2), cube2)
    return BumpReport(
        K=term1.value + term2.value,
        term1=term1,
        term2=term2,
        config={"p": p, "m": m, "gauges": "power (direct route)"},
    )


PRESETS = ("cor1.3", "cor1.4", "cor1.6", "cor1.7")


def _preset_gauges(preset: str, p: float, m: int, delta: float, eps: float) -> dict:
    if preset == "cor1.3":
        return {
            "A": young_preset("czo-A", p, delta=delta),
            "X": young_preset("cor1.3-B", p, m=m, delta=delta),
            "Y": young_preset("cor1.3-A", p, m=m, delta=delta),
            "D": young_preset("czo-B", p, delta=delta),
            "Phi": young_preset("cor1.3-Phi", p),
        }
    if preset == "cor1.4":
        return {
            "A": young_preset("czo-A", p, delta=delta),
            "X": young_preset("cor1.4-B", p, m=m, delta=delta, eps=eps),
            "Y": young_preset("cor1.4-A", p, m=m, delta=delta, eps=eps),
            "D": young_preset("czo-B", p, delta=delta),
            "Phi": young_preset("cor1.4-Phi", p, eps=eps),
        }
    if preset == "cor1.6":
        return {
            "A": young_preset("czo-A", p, delta=delta),
            "X": young_preset("cor1.6-B", p, delta=delta),
            "Y": young_preset("cor1.6-A", p, delta=delta),
            "D": young_preset("czo-B", p, delta=delta),
            "Phi": None,
        }
    if preset == "cor1.7":
        return {
            "A": young_preset("czo-A", p, delta=delta),
            "X": young_preset("cor1.7-B", p, m=m, delta=delta, eps=eps),
            "Y": young_preset("cor1.7-A", p, m=m, delta=delta, eps=eps),
            "D": young_preset("czo-B", p, delta=delta),
            "Phi": young_preset("cor1.7-Phi", p, eps=eps),
        }
    raise DomainError(f"unknown preset {preset!r}; known: {PRESETS}")


def _log_dual_asymptote(g: YoungFunction):
    """Closed-form asymptote of the conjugate of a log-bump gauge, returned
    as a raw callable for tail integration (no convexity validation)."""
    if isinstance(g, LogBump):
        p, q, r = g.p, g.q, 0.0
    elif isinstance(g, LogLogBump):
        p, q, r = g.p, g.q, g.r
    elif isinstance(g, Power):
        p, q, r = g.p, 0.0, 0.0
    else:
        return None
    pp = _dual(p)
    ee = math.exp(math.e)

    def conj(t: float) -> float:
        return (
            t ** pp
            / math.log(math.e + t) ** (q * pp / p)
            / math.log(math.log(ee + t)) ** (r * pp / p)
        )

    return conj, pp


def dual_membership_ok(g: YoungFunction, target_p: float) -> Optional[bool]:
    """Numerically test whether the conjugate of ``g`` passes the tail
    integrability test at exponent ``target_p`` (via its asymptote)."""
    asym = _log_dual_asymptote(g)
    if asym is None:
        return None
    conj, _ = asym
    return bp_tail(conj, target_p).verdict == "converges"


def separated_log_bump(
    preset: str,
    u: Weight,
    v: Weight,
    p: float,
    grid: DyadicGrid,
    m: int = 1,
    delta: float = 1.0,
    eps: float = 1.0,
    b: Optional[SampledFunction] = None,
    a_root: Optional[float] = None,
    keep_table: bool = False,
) -> BumpReport:
    """Separated two-term constant for a named log-bump preset:

    ``sup_Q lux_A(u^(1/p)) lux_X(v^(-1/p)) + sup_Q lux_Y(u^(1/p)) lux_D(v^(-1/p))``

    The symbol does not enter the weight factors here; when ``b`` is given
    its oscillation seminorm under the preset's exponential gauge is
    attached to the config for the sufficiency-side comparison.  The free
    gauges A and D default to the classical dual log bumps and their
    conjugates are tail-checked at the dual exponents.
    """
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    if delta <= 0:
        raise DomainError("delta must be positive")
    gauges = _preset_gauges(preset, p, m, delta, eps)
    warnings = []
    pp = _dual(p)
    if preset == "cor1.6" and a_root is not None:
        threshold = max(p, pp) * m / delta
        if a_root <= threshold:
            warnings.append(
                f"root class parameter a={a_root} does not exceed max(p,p')*m/delta={threshold:.4g}"
            )
    if dual_membership_ok(gauges["A"], pp) is False:
        warnings.append("conjugate of the free u-gauge failed the tail test at p'")
    if dual_membership_ok(gauges["D"], p) is False:
        warnings.append("conjugate of the free v-gauge failed the tail test at p")

    u_pow = u.power(1.0 / p)
    v_neg = v.power(-1.0 / p)
    A, X, Y, D = gauges["A"], gauges["X"], gauges["Y"], gauges["D"]
    best1 = best2 = -math.inf
    cube1 = cube2 = None
    table = [] if keep_table else None
    for Q in grid.cubes():
        uv = u_pow.restrict(Q)
        vv = v_neg.restrict(Q)
        t1 = luxemburg(A, uv)[0] * luxemburg(X, vv)[0]
        t2 = luxemburg(Y, uv)[0] * luxemburg(D, vv)[0]
        if table is not None:
            table.append((Q, float(t1), float(t2)))
        if t1 > best1:
            best1, cube1 = t1, Q
        if t2 > best2:
            best2, cube2 = t2, Q
    config = {
        "preset": preset,
        "p": p,
        "m": m,
        "delta": delta,
        "eps": eps,
        "gauges": {k: (g.to_dict() if g is not None else None) for k, g in gauges.items()},
    }
    if b is not None and gauges["Phi"] is not None:
        from .oscillation import osc_seminorm

        rep = osc_seminorm(gauges["Phi"], b, grid)
        config["symbol_osc"] = rep.seminorm
        config["symbol_osc_power_m"] = rep.seminorm ** m
    term1 = SupReport(float(best1), cube1)
    term2 = SupReport(float(best2), cube2)
    return BumpReport(
        K=term1.value + term2.value,
        term1=term1,
        term2=term2,
        config=config,
        warnings=tuple(warnings),
        per_cube=tuple(table) if table is not None else None,
    )


@dataclass(frozen=True)
class NecessityReport:
    """The two weighted oscillation constants any bounded commutator forces."""

    first: SupReport
    second: SupReport
    p: float
    m: int

    def as_dict(self):
        return {
            "first": self.first.as_dict(),
            "second": self.second.as_dict(),
            "p": self.p,
            "m": self.m,
        }


def necessity_constants(
    b: SampledFunction, m: int, u: Weight, v: Weight, p: float, grid: DyadicGrid
) -> NecessityReport:
    """``sup_I ((1/v(I)) int_I |b-b_I|^{mp} u)^(1/p)`` and the dual
    ``sup_I ((1/u^{-p'/p}(I)) int_I |b-b_I|^{mp'} v^{-p'/p})^(1/p')``."""
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    if m < 1:
        raise DomainError("m must be >= 1")
    pp = _dual(p)
    u_neg = u.power(-pp / p)
    sigma = v.power(-pp / p)

    def first(Q: Cube) -> float:
        bv = b.restrict(Q)
        dev = np.abs(bv - bv.mean())
        num = float((dev ** (m * p) * u.restrict(Q)).sum())
        den = float(v.restrict(Q).sum())
        return (num / den) ** (1.0 / p)

    def second(Q: Cube) -> float:
        bv = b.restrict(Q)
        dev = np.abs(bv - bv.mean())
        num = float((dev ** (m * pp) * sigma.restrict(Q)).sum())
        den = float(u_neg.restrict(Q).sum())
        return (num / den) ** (1.0 / pp)

    return NecessityReport(
        first=_sup_over_cubes(grid, first),
        second=_sup_over_cubes(grid, second),
        p=p,
        m=m,
    )


@dataclass(frozen=True)
class SparseNecessityReport:
    """Per-cube extremal-function ratios against the lower bound the
    boundedness constant must dominate; the inequality is exact algebra."""

    rows: tuple  # ((cube, ratio, bound, residual), ...)
    skipped: int
    max_residual: float
    ok: bool

    def as_dict(self):
        return {
            "rows": [[Q.as_list(), r, bnd, res] for Q, r, bnd, res in self.rows],
            "skipped": self.skipped,
            "max_residual": self.max_residual,
            "ok": self.ok,
        }


def sparse_necessity_check(
    S: SparseFamily,
    b: SampledFunction,
    m: int,
    u: Weight,
    v: Weight,
    p: float,
    tol: float = 1e-8,
    max_cubes: Optional[int] = None,
) -> SparseNecessityReport:
    """For each family cube, drive the operator with the extremal function
    ``|b-b_Q|^{m(p'-1)} sigma 1_Q`` and confirm the weighted norm ratio
    dominates ``mean_Q(u)^(1/p) mean_Q(|b-b_Q|^{mp'} sigma)^(1/p')``.

    Cubes where the extremal mass vanishes are skipped (they cannot
    contribute to the supremum being certified).
    """
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    pp = _dual(p)
    sigma = v.power(-pp / p)
    template = S.lattice()
    rows = []
    skipped = 0
    cubes = S.cubes if max_cubes is None else S.cubes[:max_cubes]
    for Q in cubes:
        i0, i1 = template.index_range(Q)
        bv = b.values[i0:i1]
        dev = np.abs(bv - bv.mean())
        sv = sigma.values[i0:i1]
        mass = float(np.mean(dev ** (m * pp) * sv))
        if mass <= 0.0:
            skipped += 1
            continue
        f_vals = np.zeros(S.n)
        f_vals[i0:i1] = dev ** (m * (pp - 1.0)) * sv
        f = b.with_values(f_vals)
        Tf = apply_sparse(S, b, m, f)
        ratio = Tf.lp_norm(p, weight=u) / f.lp_norm(p, weight=v)
        bound = float(np.mean(u.values[i0:i1])) ** (1.0 / p) * mass ** (1.0 / pp)
        residual = max(0.0, (bound - ratio) / max(bound, 1e-300))
        rows.append((Q, float(ratio), float(bound), float(residual)))
    max_res = max((r[3] for r in rows), default=0.0)
    return SparseNecessityReport(
        rows=tuple(rows), skipped=skipped, max_residual=max_res, ok=max_res <= tol
    )


@dataclass(frozen=True)
class ReverseHolderReport:
    exponent: Optional[float]
    C_cap: float
    ladder: tuple  # ((r, worst margin), ...): margin >= 0 means r passed

    def as_dict(self):
        return {
            "exponent": self.exponent,
            "C_cap": self.C_cap,
            "ladder": [list(t) for t in self.ladder],
        }


def reverse_holder_exponent(
    w: Weight, grid: DyadicGrid, C_cap: float, ladder: Optional[Sequence[float]] = None
) -> ReverseHolderReport:
    """Largest ladder exponent ``r`` with
    ``mean_I(w^r)^(1/r) <= C_cap * mean_I(w)`` on every cube."""
    if C_cap <= 1.0:
        raise DomainError("C_cap must exceed 1")
    if ladder is None:
        ladder = [1.0 + 8.0 * 2.0 ** (-j) for j in range(13)]
    ladder = sorted(set(float(r) for r in ladder), reverse=True)
    rows = []
    found = None
    for r in ladder:
        wr = w.power(r)
        worst = math.inf
        for Q in grid.cubes():
            lhs = float(np.mean(wr.restrict(Q))) ** (1.0 / r)
            rhs = C_cap * float(np.mean(w.restrict(Q)))
            worst = min(worst, rhs - lhs)
        rows.append((r, worst))
        if worst >= 0.0 and found is None:
            found = r
            break
    return ReverseHolderReport(exponent=found, C_cap=C_cap, ladder=tuple(rows))


@dataclass(frozen=True)
class ChainReport:
    """Worst margins of per-cube inequality chains (>= 0 means they hold)."""

    margins: dict
    ok: bool

    def as_dict(self):
        return {"margins": self.margins, "ok": self.ok}


def ap_chain_check(w: Weight, p: float, grid: DyadicGrid, tol: float = 1e-12) -> ChainReport:
    """Per cube: ``(1/mean w)^(1/p) <= mean(w^{-p'/p})^(1/p')`` (discrete
    Hoelder) and ``mean(w^{-p'/p})^(1/p') <= [w]^(1/p) (1/mean w)^(1/p)``
    (definition of the one-weight constant over the same family)."""
    pp = _dual(p)
    w_neg = w.power(-pp / p)
    ap = ap_constant(w, p, grid).value
    m1 = m2 = math.inf
    for Q in grid.cubes():
        mw = float(np.mean(w.restrict(Q)))
        mneg = float(np.mean(w_neg.restrict(Q))) ** (1.0 / pp)
        lhs = (1.0 / mw) ** (1.0 / p)
        rhs = ap ** (1.0 / p) * lhs
        m1 = min(m1, mneg - lhs)
        m2 = min(m2, rhs - mneg)
    ok = m1 >= -tol and m2 >= -tol
    return ChainReport(margins={"holder": m1, "ap_bound": m2}, ok=ok)


def one_weight_bmo_chain(
    b: SampledFunction, m: int, w: Weight, p: float, grid: DyadicGrid, tol: float = 1e-12
) -> ChainReport:
    """Per cube:
    ``mean|b-b_I|^m <= mean(|b-b_I|^{mp} w)^(1/p) mean(w^{-p'/p})^(1/p')``
    (discrete Hoelder) followed by the one-weight constant bound; the sup of
    the left side is attached so the symbol's oscillation bound is visible.
    """
    pp = _dual(p)
    w_neg = w.power(-pp / p)
    ap = ap_constant(w, p, grid).value
    m1 = m2 = math.inf
    sup_osc = 0.0
    sup_bound = 0.0
    for Q in grid.cubes():
        bv = b.restrict(Q)
        dev = np.abs(bv - bv.mean())
        lhs = float(np.mean(dev ** m))
        mid = float(np.mean(dev ** (m * p) * w.restrict(Q))) ** (1.0 / p) * float(
            np.mean(w_neg.restrict(Q))
        ) ** (1.0 / pp)
        wq = float(w.restrict(Q).sum()) * w.h
        weighted = (float((dev ** (m * p) * w.restrict(Q)).sum()) * w.h / wq) ** (1.0 / p)
        rhs = ap ** (1.0 / p) * weighted
        m1 = min(m1, mid - lhs)
        m2 = min(m2, rhs - mid)
        sup_osc = max(sup_osc, lhs)
        sup_bound = max(sup_bound, rhs)
    ok = m1 >= -tol and m2 >= -tol
    return ChainReport(
        margins={"holder": m1, "ap_bound": m2, "sup_osc_m": sup_osc, "sup_bound": sup_bound},
        ok=ok,
    )
