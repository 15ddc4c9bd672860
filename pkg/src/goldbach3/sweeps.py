"""Error terms: single-instance deltas and the averaged sweep aggregates.

delta = R - M compares the convolution count against the main term built
from the exact local-density product.  The two sweep engines aggregate it:

  * E-mode: sum over moduli triples (k1, k2, k3) up to the caps of the
    exact maximum of |delta| over all coprime residue triples;
  * Estar-mode: sum over (k1, k2) of the maximum over (l1, l2) of the
    absolute value of the signed inner sum over k3 of lambda(k3) * delta,
    taken with a fixed residue l3; cancellation inside the inner sum is
    preserved by summing before the absolute value.

The residue maxima are always exhaustive; a work budget on the number of
(k, l)-cells refuses oversized requests instead of sampling.  Reports are
deterministic: cells are computed independently, merged in sorted key
order, and reduced with a fixed float summation order, so reruns (and any
thread count) give bit-identical output.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .arith import PrimeTable, Progression, euler_phi
from .exceptions import BudgetExceededError
from .expsum import WeightSpec
from .repcount import TripleInstance, count_convolution, triple
from .singular import (
    DEFAULT_TRUNCATION,
    SingularSeriesCache,
    SingularSeriesValue,
    main_term,
    singular_series_product,
)

__all__ = [
    "DEFAULT_BUDGET",
    "DeltaResult",
    "delta",
    "SweepConfig",
    "SweepRow",
    "EstarRow",
    "SweepReport",
    "estimate_cells",
    "sweep_E",
    "sweep_Estar",
    "PresetCaps",
    "preset_caps",
]

DEFAULT_BUDGET = 10**6


@dataclass(frozen=True)
class DeltaResult:
    """R - M for one instance, with both sides kept for reporting."""

    instance: TripleInstance
    R: float
    solutions: int
    M: float
    series: SingularSeriesValue
    delta: float
    q_max: int
    p_max: int

    @property
    def relative(self) -> float:
        """|delta| / M, infinite when the main term vanishes but R does not."""
        if self.M != 0.0:
            return abs(self.delta) / self.M
        return 0.0 if self.delta == 0.0 else math.inf


def delta(
    inst: TripleInstance,
    table: PrimeTable,
    q_max: int = DEFAULT_TRUNCATION,
    p_max: int = DEFAULT_TRUNCATION,
) -> DeltaResult:
    """Single-instance error term: convolution R minus product-route M.

    ``q_max`` is carried through for reporting; the main term itself uses
    the exact local-density product truncated at ``p_max``.
    """
    wc = count_convolution(inst, table)
    s = singular_series_product(inst, p_max)
    m = main_term(inst, s)
    return DeltaResult(
        instance=inst,
        R=wc.value,
        solutions=wc.solutions,
        M=m,
        series=s,
        delta=wc.value - m,
        q_max=q_max,
        p_max=p_max,
    )


@dataclass(frozen=True)
class SweepConfig:
    """Parameters of a sweep: target, caps, weights, truncations, budget."""

    N: int
    H1: int
    H2: int
    H3: int
    mode: str = "E"
    lam: Optional[WeightSpec] = None
    l3: Optional[int] = None
    q_max: int = DEFAULT_TRUNCATION
    p_max: int = DEFAULT_TRUNCATION
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.mode not in ("E", "Estar"):
            raise ValueError(f"mode must be 'E' or 'Estar', got {self.mode!r}")
        if min(self.H1, self.H2, self.H3) < 1:
            raise ValueError("all caps must be >= 1")
        if self.N < 6:
            raise ValueError(f"N must be >= 6, got {self.N}")
        if self.mode == "Estar":
            if self.lam is None:
                raise ValueError("Estar mode needs a WeightSpec")
            if self.l3 is not None and self.l3 != self.lam.l3:
                raise ValueError(
                    f"l3={self.l3} disagrees with the WeightSpec residue {self.lam.l3}"
                )
            object.__setattr__(self, "l3", self.lam.l3)


class SweepRow(NamedTuple):
    """One E-mode row: the residue triple maximizing |delta| for a k-triple."""

    k1: int
    k2: int
    k3: int
    l1: int
    l2: int
    l3: int
    R: float
    M: float
    delta: float
    delta_scaled: float


class EstarRow(NamedTuple):
    """One Estar-mode row: the (l1, l2) maximizing the signed inner k3-sum."""

    k1: int
    k2: int
    l1: int
    l2: int
    R_sum: float
    M_sum: float
    delta_sum: float
    delta_scaled: float


@dataclass
class SweepReport:
    mode: str
    N: int
    caps: tuple[int, int, int]
    rows: list
    aggregate: float
    metadata: dict = field(default_factory=dict)

    def recompute_aggregate(self) -> float:
        """Fold the rows again; must equal ``aggregate`` exactly."""
        total = 0.0
        for row in self.rows:
            total += abs(row.delta if self.mode == "E" else row.delta_sum)
        return total


def _coprime_pairs(H: int) -> list[tuple[int, int]]:
    return [(k, l) for k in range(1, H + 1) for l in range(k) if math.gcd(k, l) == 1]


def _phi_total(H: int) -> int:
    return sum(euler_phi(k) for k in range(1, H + 1))


def estimate_cells(cfg: SweepConfig) -> int:
    """Number of (k, l)-cells the sweep will evaluate."""
    base = _phi_total(cfg.H1) * _phi_total(cfg.H2)
    if cfg.mode == "E":
        return base * _phi_total(cfg.H3)
    k3_count = sum(1 for k in range(1, cfg.H3 + 1) if math.gcd(k, cfg.l3) == 1)
    return base * k3_count


def _fft_length(N: int) -> int:
    return 1 << (2 * N + 1).bit_length()


def _weighted_indicator(N: int, prog: Progression, table: PrimeTable) -> np.ndarray:
    p = table.primes_in_progression(N, prog)
    a = np.zeros(N + 1)
    if p.size:
        a[p] = np.log(p.astype(np.float64))
    return a


def _prepare(cfg: SweepConfig, table: PrimeTable):
    table.check_covers(cfg.N)
    est = estimate_cells(cfg)
    if est > cfg.budget:
        raise BudgetExceededError(est, cfg.budget)
    N = cfg.N
    M = _fft_length(N)
    pairs1 = _coprime_pairs(cfg.H1)
    pairs2 = _coprime_pairs(cfg.H2)
    spectra2 = {
        pair: np.fft.rfft(_weighted_indicator(N, Progression(*pair), table), M)
        for pair in pairs2
    }
    cache = SingularSeriesCache(N, cfg.p_max)
    return est, M, pairs1, pairs2, spectra2, cache


def _third_arrays(N: int, pairs3, table: PrimeTable):
    out = {}
    for pair in pairs3:
        p = table.primes_in_progression(N, Progression(*pair))
        out[pair] = (p, np.log(p.astype(np.float64)) if p.size else np.empty(0))
    return out


def _run_tasks(worker, pairs1, threads: int):
    if threads <= 1:
        blocks = [worker(pair) for pair in pairs1]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(worker, pairs1))
    cells = [cell for block in blocks for cell in block]
    cells.sort(key=lambda c: c[0])
    return cells


def sweep_E(cfg: SweepConfig, table: PrimeTable, threads: int = 1) -> SweepReport:
    """E-mode sweep: sum over k-triples of the exact residue maximum of |delta|.

    One convolution of variables 1 and 2 is shared across every k3 cell,
    which is where nearly all the time goes otherwise.
    """
    if cfg.mode != "E":
        raise ValueError("sweep_E needs an E-mode config")
    t0 = time.perf_counter()
    est, M, pairs1, pairs2, spectra2, cache = _prepare(cfg, table)
    N = cfg.N
    pairs3 = _coprime_pairs(cfg.H3)
    third = _third_arrays(N, pairs3, table)

    def worker(pair1):
        k1, l1 = pair1
        s1 = np.fft.rfft(_weighted_indicator(N, Progression(k1, l1), table), M)
        block = []
        for (k2, l2) in pairs2:
            c12 = np.fft.irfft(s1 * spectra2[(k2, l2)], M)
            for (k3, l3) in pairs3:
                p3, lg3 = third[(k3, l3)]
                r = float(np.dot(lg3, c12[N - p3])) if p3.size else 0.0
                inst = triple(N, k1, l1, k2, l2, k3, l3)
                m = main_term(inst, cache.series(inst))
                key = (k1, k2, k3, l1, l2, l3)
                block.append((key, r, m, r - m))
        return block

    cells = _run_tasks(worker, pairs1, threads)

    best: dict[tuple[int, int, int], tuple] = {}
    for key, r, m, d in cells:
        k1, k2, k3, l1, l2, l3 = key
        kkey = (k1, k2, k3)
        cur = best.get(kkey)
        if cur is None or abs(d) > abs(cur[3]):
            best[kkey] = ((l1, l2, l3), r, m, d)

    rows = []
    aggregate = 0.0
    for kkey in sorted(best):
        (l1, l2, l3), r, m, d = best[kkey]
        k1, k2, k3 = kkey
        scale = 2.0 * euler_phi(k1) * euler_phi(k2) * euler_phi(k3) / N**2
        rows.append(
            SweepRow(k1, k2, k3, l1, l2, l3, r, m, d, d * scale)
        )
        aggregate += abs(d)

    meta = _metadata(cfg, est, threads, time.perf_counter() - t0)
    return SweepReport(
        mode="E", N=N, caps=(cfg.H1, cfg.H2, cfg.H3), rows=rows,
        aggregate=aggregate, metadata=meta,
    )


def sweep_Estar(cfg: SweepConfig, table: PrimeTable, threads: int = 1) -> SweepReport:
    """Estar-mode sweep: residue maxima of the signed lambda-weighted k3-sum."""
    if cfg.mode != "Estar":
        raise ValueError("sweep_Estar needs an Estar-mode config")
    t0 = time.perf_counter()
    est, M, pairs1, pairs2, spectra2, cache = _prepare(cfg, table)
    N = cfg.N
    lam = cfg.lam
    k3s = [
        k for k in range(1, cfg.H3 + 1)
        if math.gcd(k, cfg.l3) == 1 and k <= lam.k_max
    ]
    third = _third_arrays(N, [(k, cfg.l3 % k) for k in k3s], table)

    def worker(pair1):
        k1, l1 = pair1
        s1 = np.fft.rfft(_weighted_indicator(N, Progression(k1, l1), table), M)
        block = []
        for (k2, l2) in pairs2:
            c12 = np.fft.irfft(s1 * spectra2[(k2, l2)], M)
            r_sum = 0.0
            m_sum = 0.0
            d_sum = 0.0
            for k3 in k3s:
                lam_k = float(lam.lam[k3])
                l3 = cfg.l3 % k3
                p3, lg3 = third[(k3, l3)]
                r = float(np.dot(lg3, c12[N - p3])) if p3.size else 0.0
                inst = triple(N, k1, l1, k2, l2, k3, l3)
                m = main_term(inst, cache.series(inst))
                r_sum += lam_k * r
                m_sum += lam_k * m
                d_sum += lam_k * (r - m)
            block.append(((k1, k2, l1, l2), r_sum, m_sum, d_sum))
        return block

    cells = _run_tasks(worker, pairs1, threads)

    best: dict[tuple[int, int], tuple] = {}
    for key, r_sum, m_sum, d_sum in cells:
        k1, k2, l1, l2 = key
        kkey = (k1, k2)
        cur = best.get(kkey)
        if cur is None or abs(d_sum) > abs(cur[3]):
            best[kkey] = ((l1, l2), r_sum, m_sum, d_sum)

    rows = []
    aggregate = 0.0
    for kkey in sorted(best):
        (l1, l2), r_sum, m_sum, d_sum = best[kkey]
        k1, k2 = kkey
        scale = 2.0 * euler_phi(k1) * euler_phi(k2) / N**2
        rows.append(EstarRow(k1, k2, l1, l2, r_sum, m_sum, d_sum, d_sum * scale))
        aggregate += abs(d_sum)

    meta = _metadata(cfg, est, threads, time.perf_counter() - t0)
    meta["l3"] = cfg.l3
    return SweepReport(
        mode="Estar", N=N, caps=(cfg.H1, cfg.H2, cfg.H3), rows=rows,
        aggregate=aggregate, metadata=meta,
    )


def _metadata(cfg: SweepConfig, est: int, threads: int, seconds: float) -> dict:
    return {
        "N": cfg.N,
        "mode": cfg.mode,
        "caps": [cfg.H1, cfg.H2, cfg.H3],
        "q_max": cfg.q_max,
        "p_max": cfg.p_max,
        "budget": cfg.budget,
        "estimated_cells": est,
        "threads": threads,
        "timing_seconds": seconds,  # excluded from serialized reports
    }


class PresetCaps(NamedTuple):
    H1: int
    H2: int
    H3: int
    clamped: bool
    requested: tuple[float, float, float]


def preset_caps(
    N: int, A: float, B: Optional[float] = None, budget: int = DEFAULT_BUDGET
) -> PresetCaps:
    """Cap preset sqrt(N) L^-B, sqrt(N) L^-B, N^(1/3) L^-B with L = log N.

    B defaults to 10^4 * A.  At desk scale the nominal caps collapse to
    zero (honest B) or explode past any budget (tiny B), so the result is
    clamped into [1, budget] and flagged; ``requested`` preserves the
    unclamped real values.
    """
    if N < 6:
        raise ValueError(f"N must be >= 6, got {N}")
    if B is None:
        B = 1e4 * A
    logL = math.log(math.log(N))
    h12 = math.exp(min(700.0, 0.5 * math.log(N) - B * logL))
    h3 = math.exp(min(700.0, math.log(N) / 3.0 - B * logL))
    requested = (h12, h12, h3)
    caps = [max(1, math.floor(h12)), max(1, math.floor(h12)), max(1, math.floor(h3))]
    clamped = any(math.floor(r) < 1 for r in requested)

    def cells(c):
        return _phi_total(c[0]) * _phi_total(c[1]) * _phi_total(c[2])

    while cells(caps) > budget:
        i = max(range(3), key=lambda j: caps[j])
        if caps[i] == 1:
            break
        caps[i] -= 1
        clamped = True
    return PresetCaps(caps[0], caps[1], caps[2], clamped, requested)
