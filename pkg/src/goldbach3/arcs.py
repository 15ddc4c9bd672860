"""Farey dissection of the circle into major and minor arcs.

The major arcs are closed intervals of radius 1/(q*tau) around the Farey
fractions a/q with q <= Q, inside the period [-1/tau, 1 - 1/tau); the
minor set is the complement.  The precondition tau > 2Q^2 guarantees the
arcs are pairwise disjoint and never wrap around the period boundary,
which keeps classification a plain nearest-center lookup.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np

from .arith import PrimeTable, euler_phi
from .exceptions import ArcOverlapError

__all__ = [
    "Arc",
    "ArcPartition",
    "build_partition",
    "classify",
    "classify_grid",
    "major_measure",
    "analytic_major_measure",
    "MinorStats",
    "minor_statistics",
    "preset_arc_params",
]


class Arc(NamedTuple):
    a: int
    q: int
    center: float
    radius: float


@dataclass(frozen=True)
class ArcPartition:
    """A built dissection: sorted arc list plus the (N, Q, tau) that made it."""

    N: int
    Q: int
    tau: float
    arcs: tuple[Arc, ...]

    @cached_property
    def centers(self) -> np.ndarray:
        c = np.array([arc.center for arc in self.arcs])
        c.setflags(write=False)
        return c

    @cached_property
    def radii(self) -> np.ndarray:
        r = np.array([arc.radius for arc in self.arcs])
        r.setflags(write=False)
        return r

    @property
    def period_start(self) -> float:
        return -1.0 / self.tau


def build_partition(N: int, Q: int, tau: float) -> ArcPartition:
    """Enumerate the Farey arcs for q <= Q at radius 1/(q*tau).

    Refuses tau <= 2Q^2 outright: merging overlapping arcs would silently
    change the dissection's meaning.
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    if tau <= 2 * Q * Q:
        raise ArcOverlapError(
            f"tau={tau} <= 2*Q^2={2 * Q * Q}: arcs would overlap, refusing"
        )
    arcs = [Arc(0, 1, 0.0, 1.0 / tau)]
    for q in range(2, Q + 1):
        r = 1.0 / (q * tau)
        for a in range(1, q):
            if math.gcd(a, q) == 1:
                arcs.append(Arc(a, q, a / q, r))
    arcs.sort(key=lambda arc: arc.center)
    return ArcPartition(N=N, Q=Q, tau=float(tau), arcs=tuple(arcs))


def _reduce_to_period(alpha: np.ndarray | float, partition: ArcPartition):
    start = partition.period_start
    return alpha - np.floor(alpha - start)


def classify(alpha: float, partition: ArcPartition) -> Optional[Arc]:
    """Return the containing major Arc, or None when alpha is minor.

    alpha is reduced mod 1 into the period first; boundary points (distance
    exactly the radius) count as major, i.e. the arcs are closed.
    """
    a = float(_reduce_to_period(alpha, partition))
    centers = partition.centers
    i = int(np.searchsorted(centers, a))
    for j in (i - 1, i):
        if 0 <= j < len(centers):
            arc = partition.arcs[j]
            if abs(a - arc.center) <= arc.radius:
                return arc
    return None


def classify_grid(partition: ArcPartition, T: int) -> np.ndarray:
    """Classify all grid points t/T, t = 0..T-1, in one vectorized pass.

    Returns an int array: the index into ``partition.arcs`` for major
    points, -1 for minor points.
    """
    if T < 1:
        raise ValueError(f"grid size must be positive, got {T}")
    alpha = _reduce_to_period(np.arange(T) / T, partition)
    centers = partition.centers
    radii = partition.radii
    out = np.full(T, -1, dtype=np.int64)
    idx = np.searchsorted(centers, alpha)
    for shift in (-1, 0):
        j = idx + shift
        ok = (j >= 0) & (j < len(centers))
        jj = np.where(ok, j, 0)
        hit = ok & (np.abs(alpha - centers[jj]) <= radii[jj])
        out[hit] = jj[hit]
    return out


def major_measure(partition: ArcPartition) -> float:
    """Total length of the major arcs, summed over the built list."""
    return float(sum(2.0 * arc.radius for arc in partition.arcs))


def analytic_major_measure(Q: int, tau: float) -> float:
    """The closed-form major measure sum_{q <= Q} phi(q) * 2/(q*tau)."""
    return sum(euler_phi(q) * 2.0 / (q * tau) for q in range(1, Q + 1))


class MinorStats(NamedTuple):
    sup_minor: float
    l2_full: float
    l2_minor: float


def minor_statistics(
    N: int, w, partition: ArcPartition, T: int, table: PrimeTable
) -> MinorStats:
    """Empirical sup and L2 statistics of the weighted sum K on the grid.

    sup_minor maximizes |K(t/T)| over minor-classified grid points;
    l2_full and l2_minor are the grid quadratures (1/T) sum |K|^2 over all
    points and over the minor points.  For T >= 2N+1 the full-circle L2 is
    an exact trigonometric identity against the coefficient side, which is
    verified here and enforced to 1e-8 relative.
    """
    from . import expsum  # deferred: expsum imports this module for ArcPartition

    if T < 2 * N + 1:
        raise ValueError(f"need T >= 2N+1 = {2 * N + 1} for exact grid identities, got {T}")
    kvals = expsum.eval_K_grid(N, w, table, T)
    power = np.abs(kvals) ** 2
    l2_full = float(power.sum()) / T

    _, coeffs = expsum.weight_coefficients(N, w, table)
    coeff_side = float(np.dot(coeffs, coeffs))
    scale = max(coeff_side, l2_full)
    if scale > 0 and abs(l2_full - coeff_side) > 1e-8 * scale:
        from .exceptions import ConsistencyError

        raise ConsistencyError(
            f"grid L2 {l2_full!r} disagrees with coefficient sum {coeff_side!r}"
        )

    minor = classify_grid(partition, T) < 0
    if minor.any():
        sup_minor = float(np.abs(kvals[minor]).max())
        l2_minor = float(power[minor].sum()) / T
    else:
        sup_minor = 0.0
        l2_minor = 0.0
    return MinorStats(sup_minor=sup_minor, l2_full=l2_full, l2_minor=l2_minor)


def preset_arc_params(N: int, A: float) -> tuple[int, float, bool]:
    """Dissection preset Q = (log N)^(20A), tau = N/Q, clamped to feasibility.

    The nominal Q explodes for any honest A, so it is clamped into
    [1, Q_max] with Q_max the largest Q satisfying tau > 2Q^2.  Returns
    (Q, tau, clamped).
    """
    if N < 3:
        raise ValueError("N too small for a dissection preset")
    q_cap = 1  # largest Q with 2Q^3 < N, so tau = N/Q always clears 2Q^2
    while 2 * (q_cap + 1) ** 3 < N:
        q_cap += 1
    log_q = 20.0 * A * math.log(math.log(N))
    clamped = False
    if log_q > math.log(q_cap):
        q = q_cap
        clamped = True
    else:
        q = max(1, int(math.exp(log_q)))
    return q, N / q, clamped
