"""Sparse cube families with machine-checked sparsity, the positive
commutator-type operators they carry, and the endpoint reduction bound.

A family is sparse at level ``delta`` when each cube ``Q`` owns a subset
``E_Q`` with ``|E_Q| >= delta |Q|`` and the ``E_Q`` pairwise disjoint.  The
canonical construction takes ``E_Q = Q`` minus the maximal family members
strictly inside ``Q``; families are accepted verification-first, so
arbitrary user cube sets are either certified or rejected with the
offending cube.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

from .errors import DomainError, SparsityError
from .grid import Cube, DyadicGrid, SampledFunction

__all__ = [
    "SparseFamily",
    "verify_or_build_exceptional",
    "build_sparse_stopping",
    "apply_sparse",
    "apply_sparse_adjoint",
    "duality_residual",
    "endpoint_reduction_check",
]


@dataclass(frozen=True)
class SparseFamily:
    """Certified sparse family over a fixed sample lattice.

    ``exceptional`` maps each cube to a boolean mask over the lattice; the
    masks are pairwise disjoint and each covers at least ``delta`` of its
    cube, properties checked at construction.
    """

    domain: tuple
    n: int
    delta: float
    cubes: tuple
    exceptional: Dict[Cube, np.ndarray]
    shift: float = 0.0

    @property
    def h(self) -> float:
        return (self.domain[1] - self.domain[0]) / self.n

    def lattice(self) -> SampledFunction:
        return SampledFunction(self.domain, np.zeros(self.n))

    def achieved_delta(self) -> float:
        template = self.lattice()
        worst = 1.0
        for Q in self.cubes:
            i0, i1 = template.index_range(Q)
            worst = min(worst, self.exceptional[Q].sum() / (i1 - i0))
        return worst

    def to_json_dict(self) -> dict:
        return {
            "domain": list(self.domain),
            "n": self.n,
            "delta": self.delta,
            "shift": self.shift,
            "cubes": [Q.as_list() for Q in self.cubes],
            "exceptional": [_mask_to_ranges(self.exceptional[Q]) for Q in self.cubes],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SparseFamily":
        cubes = tuple(Cube(a, side) for a, side in d["cubes"])
        exceptional = {
            Q: _ranges_to_mask(ranges, d["n"]) for Q, ranges in zip(cubes, d["exceptional"])
        }
        return cls(
            domain=tuple(d["domain"]),
            n=int(d["n"]),
            delta=float(d["delta"]),
            cubes=cubes,
            exceptional=exceptional,
            shift=float(d.get("shift", 0.0)),
        )


def _mask_to_ranges(mask: np.ndarray) -> list:
    idx = np.flatnonzero(np.diff(np.concatenate(([0], mask.view(np.int8), [0]))))
    return [[int(a), int(b)] for a, b in zip(idx[::2], idx[1::2])]


def _ranges_to_mask(ranges: Sequence[Sequence[int]], n: int) -> np.ndarray:
    mask = np.zeros(n, dtype=bool)
    for a, b in ranges:
        mask[a:b] = True
    return mask


def verify_or_build_exceptional(
    cubes: Iterable[Cube], delta: float, domain, n: int, shift: float = 0.0
) -> SparseFamily:
    """Build ``E_Q = Q`` minus the maximal family cubes strictly inside ``Q``
    and certify ``|E_Q| >= delta |Q|``.

    Disjointness of the ``E_Q`` holds by construction: every family cube
    strictly inside ``Q`` sits inside one of the removed maximal cubes.
    Raises :class:`SparsityError` carrying the first offending cube and its
    achieved measure ratio.
    """
    if not 0.0 < delta < 1.0:
        raise DomainError("delta must lie in (0, 1)")
    family = sorted(set(cubes), key=Cube.key)
    if not family:
        raise DomainError("empty cube family")
    template = SampledFunction(domain, np.zeros(n))
    exceptional: Dict[Cube, np.ndarray] = {}
    for Q in family:
        i0, i1 = template.index_range(Q)
        mask = np.zeros(n, dtype=bool)
        mask[i0:i1] = True
        maximal = []
        for P in family:
            if P == Q or not P.strictly_inside(Q):
                continue
            if any(M.contains_cube(P) for M in maximal):
                continue
            maximal.append(P)
        for M in maximal:
            j0, j1 = template.index_range(M)
            mask[j0:j1] = False
        ratio = mask.sum() / (i1 - i0)
        if ratio < delta - 1e-12:
            raise SparsityError(
                f"cube {Q} keeps only {ratio:.6f} of its measure (< delta = {delta})",
                cube=Q,
                ratio=float(ratio),
            )
        exceptional[Q] = mask
    cover = np.zeros(n, dtype=np.int64)
    for mask in exceptional.values():
        cover += mask
    if cover.max() > 1:
        raise SparsityError("exceptional sets overlap; family cubes come from mixed grids")
    return SparseFamily(
        domain=tuple(float(x) for x in domain),
        n=int(n),
        delta=float(delta),
        cubes=tuple(family),
        exceptional=exceptional,
        shift=float(shift),
    )


def build_sparse_stopping(f: SampledFunction, grid: DyadicGrid, ratio: float) -> SparseFamily:
    """Stopping-time family of ``f >= 0``: starting from the top cubes, select
    the maximal descendants whose average jumps past ``ratio`` times the
    parent average, and recurse from those.

    The selected children of a cube occupy at most ``1/ratio`` of it, so the
    family is sparse at ``delta = 1 - 1/ratio``; this is verified rather
    than assumed.  Only unshifted grids are supported (shifted boundary
    cubes are truncated and no longer halve on the lattice).
    """
    if ratio <= 1.0:
        raise DomainError("stopping ratio must exceed 1")
    if grid.shift != 0.0:
        raise DomainError("stopping construction needs an unshifted grid")
    if np.any(f.values < 0):
        raise DomainError("stopping construction needs f >= 0")
    min_side = 2.0 ** grid.k_min

    def mean_on(Q: Cube) -> float:
        return float(f.restrict(Q).mean())

    selected = list(grid.top_cubes())
    work = list(selected)
    while work:
        next_round = []
        for Q in work:
            thr = ratio * mean_on(Q)
            stack = [C for C in Q.children() if C.side >= min_side * (1 - 1e-9)]
            while stack:
                C = stack.pop()
                if mean_on(C) > thr:
                    next_round.append(C)
                else:
                    stack.extend(
                        D for D in C.children() if D.side >= min_side * (1 - 1e-9)
                    )
        selected.extend(next_round)
        work = next_round
    return verify_or_build_exceptional(
        selected, 1.0 - 1.0 / ratio, f.domain, f.n, shift=grid.shift
    )


def _check_lattice(S: SparseFamily, *fns: SampledFunction) -> None:
    for g in fns:
        if g.domain != S.domain or g.n != S.n:
            raise DomainError("function lattice does not match the sparse family lattice")


def apply_sparse(
    S: SparseFamily, b: SampledFunction, m: int, f: SampledFunction
) -> SampledFunction:
    """Sum over family cubes of ``mean_Q(|b - b_Q|^m f)`` spread over ``Q``."""
    if m < 0:
        raise DomainError("m must be >= 0")
    _check_lattice(S, b, f)
    out = np.zeros(S.n)
    template = S.lattice()
    for Q in S.cubes:
        i0, i1 = template.index_range(Q)
        bq = b.values[i0:i1].mean()
        coef = float(np.mean(np.abs(b.values[i0:i1] - bq) ** m * f.values[i0:i1]))
        out[i0:i1] += coef
    return f.with_values(out)


def apply_sparse_adjoint(
    S: SparseFamily, b: SampledFunction, m: int, f: SampledFunction
) -> SampledFunction:
    """Sum over family cubes of ``|b(x) - b_Q|^m mean_Q(f)`` on ``Q``."""
    if m < 0:
        raise DomainError("m must be >= 0")
    _check_lattice(S, b, f)
    out = np.zeros(S.n)
    template = S.lattice()
    for Q in S.cubes:
        i0, i1 = template.index_range(Q)
        bq = b.values[i0:i1].mean()
        out[i0:i1] += np.abs(b.values[i0:i1] - bq) ** m * f.values[i0:i1].mean()
    return f.with_values(out)


def duality_residual(
    S: SparseFamily, b: SampledFunction, m: int, f: SampledFunction, g: SampledFunction
) -> float:
    """Normalized defect of the pairing identity between the operator and its
    adjoint; exact algebra at sample resolution, so only rounding remains."""
    lhs = (apply_sparse(S, b, m, f) * g).integral()
    rhs = (f * apply_sparse_adjoint(S, b, m, g)).integral()
    return abs(lhs - rhs) / (1.0 + abs(lhs))


def endpoint_reduction_check(
    b: SampledFunction, m: int, Q: Cube, f: SampledFunction, x: float
) -> Tuple[float, float]:
    """Both sides of the endpoint reduction at a point: the full binomial-type
    sum against ``(m+1)`` times its two extreme terms.

    ``lhs = sum_k |b(x)-b_Q|^(m-k) mean_Q(|b-b_Q|^k f)`` and
    ``rhs = (m+1) (|b(x)-b_Q|^m mean_Q(f) + mean_Q(|b-b_Q|^m f))``; the
    inequality ``lhs <= rhs`` is exact termwise algebra for ``f >= 0``
    (each mixed power is at most the larger endpoint power).
    """
    if m < 0:
        raise DomainError("m must be >= 0")
    if np.any(f.values < 0):
        raise DomainError("endpoint reduction needs f >= 0")
    x0, x1 = b.domain
    if not (x0 <= x < x1):
        raise DomainError("x outside the domain")
    cell = min(int((x - x0) / b.h), b.n - 1)
    vals_b = b.restrict(Q)
    vals_f = f.restrict(Q)
    bq = vals_b.mean()
    dev_x = abs(b.values[cell] - bq)
    devs = np.abs(vals_b - bq)
    lhs = 0.0
    for k in range(m + 1):
        lhs += dev_x ** (m - k) * float(np.mean(devs ** k * vals_f))
    rhs = (m + 1) * (
        dev_x ** m * float(np.mean(vals_f)) + float(np.mean(devs ** m * vals_f))
    )
    return lhs, rhs
