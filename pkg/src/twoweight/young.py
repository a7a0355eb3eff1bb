"""Young-function calculus: evaluation, numeric inverses, convex conjugates,
integral growth tests and inverse-compatibility checks.

A Young function is an increasing convex gauge ``G`` on ``[0, inf)`` with
``G(0) = 0`` and superlinear growth (``G(t)/t -> inf``); the linear gauge
``t`` is admitted by convention.  The concrete families implemented here are

* ``Power(p)``            : ``t**p``
* ``LogBump(p, q)``       : ``t**p * log(e+t)**q``
* ``LogLogBump(p, q, r)`` : ``t**p * log(e+t)**q * log(log(e**e+t))**r``
* ``ExpMinusOne(a)``      : ``exp(t**a) - 1``
* ``DoubleExp(r)``        : ``exp(exp(t**r)) - e``
* ``Tabulated(knots)``    : monotone convex interpolation of user data

All numerical routines are derivative-free (bisection / ternary search) so
they work uniformly across families, including tabulated ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, InvariantViolation

__all__ = [
    "YoungFunction",
    "Power",
    "LogBump",
    "LogLogBump",
    "ExpMinusOne",
    "DoubleExp",
    "Tabulated",
    "evaluate",
    "inverse",
    "associate",
    "associate_inverse",
    "check_duality_sandwich",
    "bp_tail",
    "bp_verdict_analytic",
    "holder_triple_check",
    "osc_gauge_compatible",
    "log_bump_asymptotics_check",
    "power_compose",
    "young_preset",
    "young_from_dict",
    "BpReport",
    "RatioReport",
    "SandwichReport",
    "AsymptoticsReport",
]

_E = math.e
_CONVEXITY_SLACK = 1e-9


class YoungFunction:
    """Common interface for the gauge families.

    Subclasses implement ``_eval`` on nonnegative numpy arrays; shape and
    parameter validation happens once at construction.  ``convex_ok`` is
    False for the few gauges admitted without a convexity certificate
    (power compositions with exponent below 1); conjugate-based operations
    reject those.
    """

    convex_ok: bool = True

    def evaluate(self, t):
        """Evaluate the gauge at ``t`` (scalar or array), rejecting ``t < 0``."""
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0):
            raise DomainError(f"{self!r} evaluated at negative argument")
        out = self._eval(arr)
        if np.isscalar(t) or arr.ndim == 0:
            return float(out)
        return out

    def __call__(self, t):
        return self.evaluate(t)

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    # -- construction-time shape validation -------------------------------

    def _shape_grid(self) -> np.ndarray:
        return np.logspace(-4.0, 4.0, 65)

    def _validate_shape(self, check_convexity: bool = True) -> None:
        if self.evaluate(0.0) != 0.0:
            raise InvariantViolation(f"{self!r}: gauge must vanish at 0")
        grid = self._shape_grid()
        with np.errstate(over="ignore"):
            vals = self._eval(grid)
        finite = np.isfinite(vals)
        if finite.sum() < 8:
            raise InvariantViolation(f"{self!r}: gauge overflows on almost all of the test grid")
        t = grid[finite]
        v = vals[finite]
        if np.any(np.diff(v) <= 0):
            raise InvariantViolation(f"{self!r}: gauge is not strictly increasing")
        if not check_convexity:
            return
        # chord test: the middle point must sit below the chord
        t1, t2, t3 = t[:-2], t[1:-1], t[2:]
        v1, v2, v3 = v[:-2], v[1:-1], v[2:]
        chord = v1 + (v3 - v1) * (t2 - t1) / (t3 - t1)
        if np.any(v2 > chord * (1.0 + _CONVEXITY_SLACK) + 1e-300):
            raise InvariantViolation(f"{self!r}: gauge failed the convexity chord test")


@dataclass(frozen=True)
class Power(YoungFunction):
    """``t**p`` with ``p >= 1``; ``p = 1`` is the linear gauge (by convention)."""

    p: float

    def __post_init__(self):
        if self.p < 1.0:
            raise DomainError(f"Power exponent must be >= 1, got {self.p}")
        self._validate_shape()

    def _eval(self, t):
        return t ** self.p

    def to_dict(self):
        return {"family": "Power", "p": self.p}


@dataclass(frozen=True)
class LogBump(YoungFunction):
    """``t**p * log(e+t)**q`` with ``p > 1`` (``q = 0`` reduces to ``Power``)."""

    p: float
    q: float

    def __post_init__(self):
        if self.p <= 1.0:
            raise DomainError(f"LogBump needs p > 1, got {self.p}")
        self._validate_shape()

    def _eval(self, t):
        return t ** self.p * np.log(_E + t) ** self.q

    def to_dict(self):
        return {"family": "LogBump", "p": self.p, "q": self.q}


@dataclass(frozen=True)
class LogLogBump(YoungFunction):
    """``t**p * log(e+t)**q * log(log(e**e+t))**r`` with ``p > 1``."""

    p: float
    q: float
    r: float

    def __post_init__(self):
        if self.p <= 1.0:
            raise DomainError(f"LogLogBump needs p > 1, got {self.p}")
        self._validate_shape()

    def _eval(self, t):
        return (
            t ** self.p
            * np.log(_E + t) ** self.q
            * np.log(np.log(math.exp(_E) + t)) ** self.r
        )

    def to_dict(self):
        return {"family": "LogLogBump", "p": self.p, "q": self.q, "r": self.r}


@dataclass(frozen=True)
class ExpMinusOne(YoungFunction):
    """``exp(t**a) - 1`` with ``a > 0``.

    Convex for ``a >= 1``.  For ``0 < a < 1`` (produced by power
    composition) the gauge is increasing but not convex near 0; it is
    admitted with ``convex_ok = False`` and conjugate operations reject it.
    """

    a: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise DomainError(f"ExpMinusOne needs a > 0, got {self.a}")
        if self.a < 1.0:
            object.__setattr__(self, "convex_ok", False)
        self._validate_shape(check_convexity=self.a >= 1.0)

    def _eval(self, t):
        with np.errstate(over="ignore"):
            return np.expm1(t ** self.a)

    def to_dict(self):
        return {"family": "ExpMinusOne", "a": self.a}


@dataclass(frozen=True)
class DoubleExp(YoungFunction):
    """``exp(exp(t**r)) - e`` with ``r > 0``; same convexity caveat for r < 1."""

    r: float

    def __post_init__(self):
        if self.r <= 0.0:
            raise DomainError(f"DoubleExp needs r > 0, got {self.r}")
        if self.r < 1.0:
            object.__setattr__(self, "convex_ok", False)
        self._validate_shape(check_convexity=self.r >= 1.0)

    def _eval(self, t):
        with np.errstate(over="ignore"):
            return _E * np.expm1(np.expm1(t ** self.r))

    def to_dict(self):
        return {"family": "DoubleExp", "r": self.r}


@dataclass(frozen=True)
class Tabulated(YoungFunction):
    """Gauge given by increasing convex knots ``(t_i, y_i)``, linearly interpolated.

    The range is limited to the tabulated interval: inverses and conjugates
    over a ``Tabulated`` gauge never look past the last knot.
    """

    knots: tuple

    def __post_init__(self):
        pts = tuple((float(t), float(y)) for t, y in self.knots)
        object.__setattr__(self, "knots", pts)
        ts = np.array([t for t, _ in pts])
        ys = np.array([y for _, y in pts])
        if len(pts) < 3:
            raise DomainError("Tabulated gauge needs at least 3 knots")
        if ts[0] != 0.0 or ys[0] != 0.0:
            raise DomainError("Tabulated gauge must start at (0, 0)")
        if np.any(np.diff(ts) <= 0) or np.any(np.diff(ys) <= 0):
            raise InvariantViolation("Tabulated knots must be strictly increasing")
        slopes = np.diff(ys) / np.diff(ts)
        if np.any(np.diff(slopes) < -_CONVEXITY_SLACK * np.abs(slopes[:-1]) - 1e-300):
            raise InvariantViolation("Tabulated knots are not convex")
        object.__setattr__(self, "_ts", ts)
        object.__setattr__(self, "_ys", ys)

    @property
    def t_max(self) -> float:
        return float(self._ts[-1])

    def _eval(self, t):
        if np.any(np.asarray(t) > self._ts[-1] * (1 + 1e-12)):
            raise DomainError("Tabulated gauge evaluated beyond its last knot")
        return np.interp(t, self._ts, self._ys)

    def to_dict(self):
        return {"family": "Tabulated", "knots": [list(k) for k in self.knots]}


_FAMILIES = {
    "Power": lambda d: Power(d["p"]),
    "LogBump": lambda d: LogBump(d["p"], d["q"]),
    "LogLogBump": lambda d: LogLogBump(d["p"], d["q"], d["r"]),
    "ExpMinusOne": lambda d: ExpMinusOne(d["a"]),
    "DoubleExp": lambda d: DoubleExp(d["r"]),
    "Tabulated": lambda d: Tabulated(tuple(map(tuple, d["knots"]))),
}


def young_from_dict(d: dict) -> YoungFunction:
    """Rebuild a gauge from its ``to_dict`` record."""
    try:
        builder = _FAMILIES[d["family"]]
    except KeyError as exc:
        raise DomainError(f"unknown gauge family {d.get('family')!r}") from exc
    return builder(d)


def evaluate(phi: YoungFunction, t) -> float:
    """Evaluate ``phi`` at ``t >= 0``."""
    return phi.evaluate(t)


def _is_linear(phi: YoungFunction) -> bool:
    return isinstance(phi, Power) and phi.p == 1.0


def inverse(phi: YoungFunction, s: float) -> float:
    """Solve ``phi(t) = s`` for ``t >= 0`` by bracketing bisection.

    The returned ``t`` satisfies ``|phi(t) - s| <= max(1e-12, 1e-10 * s)``
    up to floating-point resolution of the bracket.
    """
    if s < 0:
        raise DomainError("inverse of a Young function needs s >= 0")
    if s == 0.0:
        return 0.0
    cap = phi.t_max if isinstance(phi, Tabulated) else math.inf
    hi = min(1.0, cap)
    while phi.evaluate(hi) < s:
        if hi >= cap:
            raise DomainError(f"s = {s} exceeds the range of the tabulated gauge")
        hi = min(hi * 2.0, cap)
        if hi > 1e300:
            raise InvariantViolation("inverse bracket expansion diverged")
    lo = 0.0
    tol = max(1e-12, 1e-10 * s)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = phi.evaluate(mid)
        if abs(val - s) <= tol:
            return mid
        if val < s:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    return mid


def associate(phi: YoungFunction, t: float) -> float:
    """Convex conjugate ``sup_{s>0} (s*t - phi(s))`` by ternary search.

    The map ``s -> s*t - phi(s)`` is concave, so after expanding the bracket
    until the objective has started to decrease, ternary search converges
    unconditionally.  The linear gauge is rejected: its conjugate is not
    finite-valued.
    """
    if t < 0:
        raise DomainError("associate needs t >= 0")
    if _is_linear(phi):
        raise InvariantViolation("the linear gauge has no finite-valued conjugate")
    if not phi.convex_ok:
        raise InvariantViolation(f"{phi!r} carries no convexity certificate; conjugate refused")
    if t == 0.0:
        return 0.0

    def g(s: float) -> float:
        return s * t - phi.evaluate(s)

    cap = phi.t_max if isinstance(phi, Tabulated) else math.inf
    hi = min(1.0, cap)
    while hi < cap and g(hi) >= g(0.75 * hi):
        hi = min(hi * 2.0, cap)
        if hi > 1e300:
            raise InvariantViolation(
                "conjugate supremum appears unbounded; gauge is not superlinear"
            )
    lo = 0.0
    for _ in range(200):
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if g(m1) < g(m2):
            lo = m1
        else:
            hi = m2
    return max(g(0.5 * (lo + hi)), 0.0)


def associate_inverse(phi: YoungFunction, s: float) -> float:
    """Inverse of the conjugate gauge, solved by bisection on ``associate``."""
    if s < 0:
        raise DomainError("associate_inverse needs s >= 0")
    if s == 0.0:
        return 0.0
    hi = 1.0
    while associate(phi, hi) < s:
        hi *= 2.0
        if hi > 1e300:
            raise InvariantViolation("associate_inverse bracket expansion diverged")
    lo = 0.0
    tol = max(1e-12, 1e-9 * s)
    mid = 0.5 * (lo + hi)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = associate(phi, mid)
        if abs(val - s) <= tol:
            return mid
        if val < s:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return mid


@dataclass(frozen=True)
class SandwichReport:
    """Worst-case ratios of ``inv(phi)(s) * inv(conj phi)(s) / s`` over a grid."""

    min_ratio: float
    max_ratio: float
    ok: bool
    slack: float = 1e-6

    def as_dict(self):
        return {
            "min_ratio": self.min_ratio,
            "max_ratio": self.max_ratio,
            "ok": self.ok,
            "slack": self.slack,
        }


def check_duality_sandwich(
    phi: YoungFunction, s_grid: Sequence[float], slack: float = 1e-6
) -> SandwichReport:
    """Check ``1 <= inv(phi)(s) * inv(conj phi)(s) / s <= 2`` over ``s_grid``.

    Failure is reported in the returned record, not raised: the bound is a
    property of valid gauges and a violation means the gauge (or the
    numerics) is broken.
    """
    s_grid = list(s_grid)
    if not s_grid:
        raise DomainError("s_grid must be nonempty")
    ratios = []
    for s in s_grid:
        if s <= 0:
            raise DomainError("duality sandwich grid must be positive")
        ratios.append(inverse(phi, s) * associate_inverse(phi, s) / s)
    lo, hi = min(ratios), max(ratios)
    ok = (lo >= 1.0 - slack) and (hi <= 2.0 + slack)
    return SandwichReport(min_ratio=lo, max_ratio=hi, ok=ok, slack=slack)


@dataclass(frozen=True)
class BpReport:
    """Tail integrals of ``phi(t)/t**(p+1)`` and the heuristic verdict."""

    p: float
    tail_values: tuple  # ((T, integral up to T), ...)
    verdict: str  # converges | diverges | inconclusive
    extrapolated_limit: Optional[float] = None

    def as_dict(self):
        return {
            "p": self.p,
            "tail_values": [list(t) for t in self.tail_values],
            "verdict": self.verdict,
            "extrapolated_limit": self.extrapolated_limit,
        }


def bp_tail(phi, p: float, T_list: Optional[Sequence[float]] = None) -> BpReport:
    """Integrate ``phi(t) / t**p dt/t`` from 1 up to each ``T`` and classify.

    The verdict is a finite-computation heuristic: increments between the
    last doublings must decay geometrically (ratio < 0.9) to report
    convergence, and must be non-decreasing to report divergence; anything
    else is inconclusive.  ``phi`` may be a gauge or a raw callable, so
    asymptotic comparison functions can be tested without convexity
    validation.  Known analytic verdicts live in ``bp_verdict_analytic``.
    """
    if T_list is None:
        T_list = [float(2 ** k) for k in range(1, 17)]
    T_list = [float(T) for T in T_list]
    if any(T <= 1.0 for T in T_list) or any(b <= a for a, b in zip(T_list, T_list[1:])):
        raise DomainError("T_list must be increasing and > 1")

    eval_fn = phi.evaluate if isinstance(phi, YoungFunction) else phi

    def w(x: float) -> float:
        # tail integral in log coordinates: t = e^x, dt/t = dx
        return eval_fn(math.exp(x)) * math.exp(-p * x)

    tails = []
    total = 0.0
    prev_x = 0.0
    overflowed = False
    for T in T_list:
        x = math.log(T)
        if not overflowed:
            try:
                with np.errstate(over="ignore"):
                    piece, _ = quad(w, prev_x, x, limit=200)
            except (OverflowError, ValueError):
                piece = math.inf
            if not math.isfinite(piece):
                overflowed = True
                total = math.inf
            else:
                total += piece
        tails.append((T, total))
        prev_x = x

    verdict = "inconclusive"
    limit = None
    finite_totals = [v for _, v in tails if math.isfinite(v)]
    increments = [b - a for a, b in zip(finite_totals, finite_totals[1:])]
    if overflowed:
        verdict = "diverges"
    elif len(increments) >= 4:
        last3 = increments[-3:]
        prev3 = increments[-4:-1]
        ratios = [b / a if a > 0 else math.inf for a, b in zip(prev3, last3)]
        if all(r < 0.9 for r in ratios):
            verdict = "converges"
            r = ratios[-1]
            if 0.0 < r < 1.0:
                limit = finite_totals[-1] + increments[-1] * r / (1.0 - r)
            else:
                limit = finite_totals[-1]
        elif all(b >= a * (1.0 - 1e-6) for a, b in zip(prev3, last3)):
            verdict = "diverges"
    return BpReport(p=p, tail_values=tuple(tails), verdict=verdict, extrapolated_limit=limit)


def bp_verdict_analytic(phi: YoungFunction, p: float) -> Optional[str]:
    """Closed-form integrability verdict for the families that admit one."""
    if isinstance(phi, Power):
        return "converges" if phi.p < p else "diverges"
    if isinstance(phi, LogBump):
        if phi.p != p:
            return "converges" if phi.p < p else "diverges"
        return "converges" if phi.q < -1.0 else "diverges"
    if isinstance(phi, LogLogBump):
        if phi.p != p:
            return "converges" if phi.p < p else "diverges"
        if phi.q != -1.0:
            return "converges" if phi.q < -1.0 else "diverges"
        return "converges" if phi.r < -1.0 else "diverges"
    if isinstance(phi, (ExpMinusOne, DoubleExp)):
        return "diverges"
    return None


@dataclass(frozen=True)
class RatioReport:
    """Ratios of inverse products over a log grid plus a stabilization flag.

    ``stabilized`` means the last quarter of the grid has max/min < 1.05,
    the finite stand-in for an asymptotic comparison; the measured supremum
    is reported rather than asserted against any particular constant.
    """

    t_grid: tuple
    ratios: tuple
    sup_ratio: float
    inf_ratio: float
    stabilized: bool
    tail_spread: float

    def as_dict(self):
        return {
            "sup_ratio": self.sup_ratio,
            "inf_ratio": self.inf_ratio,
            "stabilized": self.stabilized,
            "tail_spread": self.tail_spread,
        }


_DEFAULT_T0 = math.exp(2.0)


def _default_t_grid() -> np.ndarray:
    return np.logspace(math.log10(_DEFAULT_T0), 12.0, 49)


def _ratio_report(t_grid, ratios) -> RatioReport:
    ratios = np.asarray(ratios, dtype=float)
    k = max(len(ratios) // 4, 2)
    tail = ratios[-k:]
    spread = float(tail.max() / tail.min()) if tail.min() > 0 else math.inf
    return RatioReport(
        t_grid=tuple(float(t) for t in t_grid),
        ratios=tuple(float(r) for r in ratios),
        sup_ratio=float(ratios.max()),
        inf_ratio=float(ratios.min()),
        stabilized=spread < 1.05,
        tail_spread=spread,
    )


def holder_triple_check(
    A: YoungFunction,
    B: YoungFunction,
    C: YoungFunction,
    t_grid: Optional[Iterable[float]] = None,
) -> RatioReport:
    """Measure ``inv(A)(t) * inv(B)(t) / inv(C)(t)`` over a large-t grid.

    Boundedness of this ratio is the compatibility hypothesis of the
    generalized Orlicz Hoelder inequality.
    """
    grid = np.asarray(list(t_grid), dtype=float) if t_grid is not None else _default_t_grid()
    if np.any(grid <= 0):
        raise DomainError("t_grid must be positive")
    ratios = [inverse(A, t) * inverse(B, t) / inverse(C, t) for t in grid]
    return _ratio_report(grid, ratios)


def osc_gauge_compatible(
    X: YoungFunction,
    B: YoungFunction,
    phi: YoungFunction,
    m: int,
    t_grid: Optional[Iterable[float]] = None,
) -> RatioReport:
    """Measure ``inv(X)(t) * inv(phi)(t)**m / inv(B)(t)`` over a large-t grid.

    A bounded ratio is what lets an oscillation-class symbol absorb ``m``
    powers of the gauge ``phi`` into the bump ``B``.
    """
    if m < 1:
        raise DomainError("m must be a positive integer")
    grid = np.asarray(list(t_grid), dtype=float) if t_grid is not None else _default_t_grid()
    if np.any(grid <= 0):
        raise DomainError("t_grid must be positive")
    ratios = [inverse(X, t) * inverse(phi, t) ** m / inverse(B, t) for t in grid]
    return _ratio_report(grid, ratios)


@dataclass(frozen=True)
class AsymptoticsReport:
    """Numeric inverse and conjugate of a log bump against their closed-form
    asymptotes; both ratio bands should sit inside [1/10, 10] for t >= 1e3."""

    inverse_band: tuple
    associate_band: tuple
    ok: bool

    def as_dict(self):
        return {
            "inverse_band": list(self.inverse_band),
            "associate_band": list(self.associate_band),
            "ok": self.ok,
        }


def log_bump_asymptotics_check(
    psi: YoungFunction, t_grid: Optional[Iterable[float]] = None
) -> AsymptoticsReport:
    """Compare numeric ``inv(psi)`` and ``conj(psi)`` to their asymptotes.

    For ``psi = t**p log(e+t)**q`` the asymptotes are
    ``inv(psi)(t) ~ t**(1/p) / log(e+t)**(q/p)`` and
    ``conj(psi)(t) ~ t**p' / log(e+t)**(q p'/p)``; the log-log family picks
    up the matching iterated-log factors.
    """
    if isinstance(psi, LogBump):
        p, q, r = psi.p, psi.q, 0.0
    elif isinstance(psi, LogLogBump):
        p, q, r = psi.p, psi.q, psi.r
    elif isinstance(psi, Power):
        p, q, r = psi.p, 0.0, 0.0
    else:
        raise DomainError("asymptotics check applies to log-bump families only")
    pp = p / (p - 1.0)
    grid = (
        np.asarray(list(t_grid), dtype=float)
        if t_grid is not None
        else np.logspace(3.0, 12.0, 28)
    )
    if np.any(grid < 1e3):
        raise DomainError("asymptotic window starts at t = 1e3")

    def loglog(t):
        return math.log(math.log(math.exp(_E) + t))

    inv_ratios = []
    assoc_ratios = []
    for t in grid:
        asym_inv = t ** (1.0 / p) / math.log(_E + t) ** (q / p) / loglog(t) ** (r / p)
        inv_ratios.append(inverse(psi, t) / asym_inv)
        asym_assoc = t ** pp / math.log(_E + t) ** (q * pp / p) / loglog(t) ** (r * pp / p)
        assoc_ratios.append(associate(psi, t) / asym_assoc)
    bands = (
        (min(inv_ratios), max(inv_ratios)),
        (min(assoc_ratios), max(assoc_ratios)),
    )
    ok = all(0.1 <= b <= 10.0 for band in bands for b in band)
    return AsymptoticsReport(inverse_band=bands[0], associate_band=bands[1], ok=ok)


def power_compose(phi: YoungFunction, m: int) -> YoungFunction:
    """Return the gauge ``t -> phi(t**(1/m))``.

    Only families whose composition stays in closed form are supported:
    ``Power`` (when ``p/m >= 1``), ``ExpMinusOne`` and ``DoubleExp``.  The
    identity this buys is ``luxemburg(f**m) = luxemburg(f)**m`` under the
    composed gauge, which holds by substitution whether or not the
    composition stays convex; compositions that lose convexity come back
    with ``convex_ok = False``.
    """
    if not isinstance(m, int) or m < 1:
        raise DomainError("m must be a positive integer")
    if m == 1:
        return phi
    if isinstance(phi, Power):
        if phi.p / m < 1.0:
            raise InvariantViolation(f"Power({phi.p}) composed with m={m} leaves the convex range")
        return Power(phi.p / m)
    if isinstance(phi, ExpMinusOne):
        return ExpMinusOne(phi.a / m)
    if isinstance(phi, DoubleExp):
        return DoubleExp(phi.r / m)
    raise InvariantViolation(
        f"power composition of {type(phi).__name__} leaves the closed-form families"
    )


def young_preset(name: str, p: float, m: int = 1, delta: float = 1.0, eps: float = 1.0):
    """Named gauge constructors used by the separated-bump presets.

    ``-A`` variants bump the ``u`` side at exponent ``p``; ``-B`` variants
    bump the ``v`` side at the dual exponent; ``-Phi`` variants build the
    exponential oscillation gauge of the matching symbol class.
    """
    if p <= 1.0:
        raise DomainError("presets need p > 1")
    pp = p / (p - 1.0)
    table: dict[str, Callable[[], YoungFunction]] = {
        "cor1.3-A": lambda: LogBump(p, (m + 1) * p - 1 + delta),
        "cor1.3-B": lambda: LogBump(pp, (m + 1) * pp - 1 + delta),
        "cor1.3-Phi": lambda: ExpMinusOne(1.0),
        "cor1.4-A": lambda: LogBump(p, (eps * m + 1) * p - 1 + delta),
        "cor1.4-B": lambda: LogBump(pp, (eps * m + 1) * pp - 1 + delta),
        "cor1.4-Phi": lambda: ExpMinusOne(1.0 / eps),
        "cor1.6-A": lambda: LogBump(p, p - 1 + delta),
        "cor1.6-B": lambda: LogBump(pp, pp - 1 + delta),
        "cor1.7-A": lambda: LogLogBump(p, p - 1, (1 + m * eps) * p - 1 + delta),
        "cor1.7-B": lambda: LogLogBump(pp, pp - 1, (1 + m * eps) * pp - 1 + delta),
        "cor1.7-Phi": lambda: DoubleExp(1.0 / eps),
        "czo-A": lambda: LogBump(p, p - 1 + delta),
        "czo-B": lambda: LogBump(pp, pp - 1 + delta),
    }
    try:
        return table[name]()
    except KeyError as exc:
        raise DomainError(f"unknown young preset {name!r}; known: {sorted(table)}") from exc
