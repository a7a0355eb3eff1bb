"""Half-open cubes (intervals), shifted dyadic grids, and functions sampled
at the midpoints of a uniform lattice.

Everything here is one-dimensional: the quantitative operator work lives on
the line, so cubes are intervals ``[a, a + side)``.  Sampling is midpoint
based, which keeps singular kernels and symbols with endpoint blow-ups
(``log(1/x)`` and friends) finite at every node; suprema computed over the
finite cube family are then certified lower bounds for the true suprema.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .errors import AlignmentError, DomainError

__all__ = [
    "Cube",
    "DyadicGrid",
    "SampledFunction",
    "Weight",
    "average",
    "dyadic_cubes",
    "shifted_grids",
    "make_function",
    "make_weight",
    "GENERATORS",
]

_ALIGN_TOL = 1e-9


@dataclass(frozen=True, order=True)
class Cube:
    """Half-open interval ``[a, a + side)``."""

    a: float
    side: float

    def __post_init__(self):
        if not (self.side > 0):
            raise DomainError(f"cube side must be positive, got {self.side}")

    @property
    def b(self) -> float:
        return self.a + self.side

    @property
    def center(self) -> float:
        return self.a + 0.5 * self.side

    def contains(self, x: float) -> bool:
        return self.a <= x < self.b

    def contains_cube(self, other: "Cube") -> bool:
        return self.a <= other.a + _ALIGN_TOL * other.side and other.b <= self.b + _ALIGN_TOL * other.side

    def strictly_inside(self, other: "Cube") -> bool:
        """True when self is a proper subcube of other."""
        return other.contains_cube(self) and self.side < other.side * (1 - _ALIGN_TOL)

    def children(self) -> tuple:
        half = self.side / 2.0
        return (Cube(self.a, half), Cube(self.a + half, half))

    def key(self) -> tuple:
        """Deterministic sort key: coarse to fine, left to right."""
        return (-self.side, self.a)

    def __str__(self):
        return f"[{self.a:g}, {self.b:g})"

    def as_list(self):
        return [self.a, self.side]


@dataclass(frozen=True)
class DyadicGrid:
    """Dyadic cubes of side ``2**k``, ``k_min <= k <= k_max``, anchored at the
    left end of the domain and optionally shifted.

    Per level the cubes partition the domain exactly; shifted levels get
    their two boundary cubes truncated to the domain, which preserves both
    the partition property and nested-or-disjoint.
    """

    domain: tuple
    k_min: int
    k_max: int
    shift: float = 0.0

    def __post_init__(self):
        x0, x1 = self.domain
        object.__setattr__(self, "domain", (float(x0), float(x1)))
        if not x1 > x0:
            raise DomainError("empty domain")
        if self.k_min > self.k_max:
            raise DomainError("k_min must not exceed k_max")
        top = 2.0 ** self.k_max
        ratio = (x1 - x0) / top
        if abs(ratio - round(ratio)) > _ALIGN_TOL or round(ratio) < 1:
            raise DomainError(
                f"domain length {x1 - x0} is not a multiple of the top cube side {top}"
            )
        if not (0.0 <= self.shift < top):
            raise DomainError("shift must lie in [0, top cube side)")

    @property
    def levels(self) -> range:
        return range(self.k_max, self.k_min - 1, -1)

    def cubes_at_level(self, k: int) -> Iterator[Cube]:
        x0, x1 = self.domain
        side = 2.0 ** k
        anchor = x0 + self.shift
        j_lo = math.floor((x0 - anchor) / side + _ALIGN_TOL)
        j_hi = math.ceil((x1 - anchor) / side - _ALIGN_TOL)
        for j in range(j_lo, j_hi):
            a = max(anchor + j * side, x0)
            b = min(anchor + (j + 1) * side, x1)
            if b - a > _ALIGN_TOL * side:
                yield Cube(a, b - a)

    def cubes(self) -> Iterator[Cube]:
        for k in self.levels:
            yield from self.cubes_at_level(k)

    def cubes_containing(self, x: float) -> Iterator[Cube]:
        for Q in self.cubes():
            if Q.contains(x):
                yield Q

    def top_cubes(self) -> list:
        return list(self.cubes_at_level(self.k_max))


def dyadic_cubes(grid: DyadicGrid) -> Iterator[Cube]:
    """All cubes of all levels, coarse to fine, left to right."""
    return grid.cubes()


def shifted_grids(
    domain: Sequence[float],
    k_min: int,
    k_max: int,
    n_shifts: int = 1,
    snap: Optional[float] = None,
) -> list:
    """One unshifted grid, or three grids shifted by thirds of the top side.

    Shifts are snapped to multiples of ``snap`` (default: the finest cube
    side) so cube corners stay on the sample lattice.
    """
    if n_shifts not in (1, 3):
        raise DomainError("n_shifts must be 1 or 3")
    top = 2.0 ** k_max
    if snap is None:
        snap = 2.0 ** k_min
    shifts = [0.0]
    if n_shifts == 3:
        for frac in (1.0 / 3.0, 2.0 / 3.0):
            raw = frac * top
            shifts.append(round(raw / snap) * snap % top)
    return [DyadicGrid(tuple(domain), k_min, k_max, shift=s) for s in shifts]


class SampledFunction:
    """Real function on ``[x0, x1)`` stored by its midpoint samples.

    ``n`` must be a power of two so dyadic cubes align with sample blocks.
    Values are interpreted as piecewise constant on the sample cells, which
    makes cube averages exact sums.
    """

    def __init__(self, domain: Sequence[float], values):
        x0, x1 = float(domain[0]), float(domain[1])
        if not x1 > x0:
            raise DomainError("empty domain")
        vals = np.asarray(values, dtype=float).copy()
        n = vals.size
        if n < 2 or (n & (n - 1)) != 0:
            raise DomainError(f"n_samples must be a power of two >= 2, got {n}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("sample values must be finite")
        self.domain = (x0, x1)
        self.values = vals
        self.n = n
        self.h = (x1 - x0) / n

    # -- construction ------------------------------------------------------

    @classmethod
    def from_callable(cls, fn: Callable[[np.ndarray], np.ndarray], domain, n: int):
        x0, x1 = float(domain[0]), float(domain[1])
        h = (x1 - x0) / n
        mids = x0 + (np.arange(n) + 0.5) * h
        return cls((x0, x1), np.asarray(fn(mids), dtype=float) * np.ones(n))

    @classmethod
    def from_csv(cls, path):
        xs, vals = [], []
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                xs.append(float(row[0]))
                vals.append(float(row[1]))
        xs = np.asarray(xs)
        vals = np.asarray(vals)
        if xs.size < 2:
            raise DomainError("CSV needs at least two samples")
        h = xs[1] - xs[0]
        if h <= 0 or np.any(np.abs(np.diff(xs) - h) > _ALIGN_TOL * h):
            raise DomainError("CSV samples must be uniformly spaced and increasing")
        return cls((xs[0] - 0.5 * h, xs[-1] + 0.5 * h), vals)

    def to_csv(self, path):
        mids = self.midpoints()
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "value"])
            for x, v in zip(mids, self.values):
                w.writerow([repr(x), repr(v)])

    # -- geometry ----------------------------------------------------------

    def midpoints(self) -> np.ndarray:
        x0, _ = self.domain
        return x0 + (np.arange(self.n) + 0.5) * self.h

    def top_cube(self) -> Cube:
        return Cube(self.domain[0], self.domain[1] - self.domain[0])

    def index_range(self, Q: Cube) -> tuple:
        """Sample index block covered by ``Q``; raises if misaligned."""
        x0, x1 = self.domain
        if Q.a < x0 - _ALIGN_TOL * self.h or Q.b > x1 + _ALIGN_TOL * self.h:
            raise AlignmentError(f"cube {Q} leaves the domain [{x0}, {x1})")
        r0 = (Q.a - x0) / self.h
        r1 = (Q.b - x0) / self.h
        i0, i1 = round(r0), round(r1)
        if abs(r0 - i0) > _ALIGN_TOL or abs(r1 - i1) > _ALIGN_TOL:
            raise AlignmentError(f"cube {Q} is not aligned to the sample lattice (h={self.h})")
        if i1 <= i0:
            raise AlignmentError(f"cube {Q} covers no samples at resolution {self.n}")
        return int(i0), int(i1)

    def restrict(self, Q: Cube) -> np.ndarray:
        i0, i1 = self.index_range(Q)
        return self.values[i0:i1]

    # -- arithmetic (pointwise, same lattice) --------------------------------

    def _coerce(self, other):
        if isinstance(other, SampledFunction):
            if other.domain != self.domain or other.n != self.n:
                raise AlignmentError("functions live on different lattices")
            return other.values
        return float(other)

    def with_values(self, values) -> "SampledFunction":
        return SampledFunction(self.domain, values)

    def __add__(self, other):
        return self.with_values(self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.with_values(self.values - self._coerce(other))

    def __rsub__(self, other):
        return self.with_values(self._coerce(other) - self.values)

    def __mul__(self, other):
        return self.with_values(self.values * self._coerce(other))

    __rmul__ = __mul__

    def __abs__(self):
        return self.with_values(np.abs(self.values))

    def power(self, s: float) -> "SampledFunction":
        return self.with_values(self.values ** s)

    def integral(self) -> float:
        """Integral over the domain (midpoint rule, exact for cell steps)."""
        return float(self.values.sum() * self.h)

    def lp_norm(self, p: float, weight: Optional["SampledFunction"] = None) -> float:
        w = weight.values if weight is not None else 1.0
        return float((np.abs(self.values) ** p * w).sum() * self.h) ** (1.0 / p)


class Weight(SampledFunction):
    """Strictly positive sampled function; derived powers stay finite."""

    def __init__(self, domain, values):
        super().__init__(domain, values)
        if np.any(self.values <= 0):
            raise DomainError("weights must be strictly positive at every sample")

    @classmethod
    def from_function(cls, f: SampledFunction) -> "Weight":
        return cls(f.domain, f.values)

    def power(self, s: float) -> "Weight":
        return Weight(self.domain, self.values ** s)

    def measure(self, f_or_cube) -> float:
        """Weighted measure of a cube: integral of the weight over it."""
        vals = self.restrict(f_or_cube)
        return float(vals.sum() * self.h)


def average(f: SampledFunction, Q: Cube) -> float:
    """Mean of ``f`` over ``Q`` (exact for the piecewise-constant sample model)."""
    return float(np.mean(f.restrict(Q)))


# -- named generators for scenario files and the CLI --------------------------


def _gen_constant(x, c=1.0):
    return np.full_like(x, float(c))


def _gen_linear(x):
    return np.asarray(x, dtype=float)


def _gen_indicator(x, a=0.0, b=0.5):
    return ((x >= a) & (x < b)).astype(float)


def _gen_power_weight(x, alpha=0.5):
    return np.abs(x) ** alpha


def _gen_log_symbol(x):
    return np.log(1.0 / np.abs(x))


def _gen_root_log_symbol(x, a=2.0):
    return np.abs(np.log(np.abs(x))) ** (1.0 / a)


def _gen_loglog_symbol(x, s=1.0):
    return np.log(np.e + np.log(np.e + 1.0 / np.abs(x))) ** s


def _gen_gauss_bump(x, center=0.5, width=0.25):
    return np.exp(-(((x - center) / width) ** 2))


def _gen_sin(x, freq=1.0):
    return np.sin(freq * x)


def _gen_poly(x, coeffs=(0.0, 1.0)):
    return np.polyval(list(reversed(list(coeffs))), x)


def _gen_steps(x, seed=0, pieces=8, low=-1.0, high=1.0):
    rng = np.random.default_rng(int(seed))
    levels = rng.uniform(low, high, size=int(pieces))
    idx = np.minimum((np.arange(x.size) * pieces) // x.size, pieces - 1)
    return levels[idx]


GENERATORS = {
    "constant": _gen_constant,
    "linear": _gen_linear,
    "indicator": _gen_indicator,
    "power_weight": _gen_power_weight,
    "log_symbol": _gen_log_symbol,
    "root_log_symbol": _gen_root_log_symbol,
    "loglog_symbol": _gen_loglog_symbol,
    "gauss_bump": _gen_gauss_bump,
    "sin": _gen_sin,
    "poly": _gen_poly,
    "steps": _gen_steps,
}


def make_function(spec: dict, domain, n: int) -> SampledFunction:
    """Build a SampledFunction from a scenario record.

    ``{"generator": name, **params}`` draws from the named generators;
    ``{"csv": path}`` loads a two-column file.
    """
    if "csv" in spec:
        return SampledFunction.from_csv(spec["csv"])
    name = spec.get("generator")
    if name not in GENERATORS:
        raise DomainError(f"unknown generator {name!r}; known: {sorted(GENERATORS)}")
    params = {k: v for k, v in spec.items() if k != "generator"}
    fn = GENERATORS[name]
    return SampledFunction.from_callable(lambda x: fn(x, **params), domain, n)


def make_weight(spec: dict, domain, n: int) -> Weight:
    f = make_function(spec, domain, n)
    return Weight.from_function(f)
