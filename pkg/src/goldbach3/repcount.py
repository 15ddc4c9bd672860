"""Weighted counts of three-prime representations and prime pair correlations.

The central object is

    R(N) = sum over ordered prime triples p1 + p2 + p3 = N,
           with p_i restricted to its progression,
           of log(p1) * log(p2) * log(p3),

computed two independent ways: a direct triple enumeration (the oracle,
capped at small N because of its cost) and an FFT convolution path that
scales to N around 10^6 and beyond.  Both also produce the unweighted
ordered-triple count; the convolution recovers it by rounding and loudly
refuses if the rounded values drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arith import PrimeTable, Progression
from .exceptions import ConsistencyError

__all__ = [
    "TripleInstance",
    "WeightedCount",
    "triple",
    "count_direct",
    "count_convolution",
    "pair_correlation",
    "DIRECT_CAP",
]

# Direct enumeration is for oracle duty only; anything bigger goes through
# the convolution path.  Callers may raise the cap deliberately.
DIRECT_CAP = 3000

# Half-integer convolution values this far from an integer mean the FFT
# precision budget is gone; refuse instead of silently rounding.
ROUNDING_GUARD = 1e-3


@dataclass(frozen=True)
class TripleInstance:
    """A target N together with the three progression constraints."""

    N: int
    progs: tuple[Progression, Progression, Progression]

    def __post_init__(self):
        if len(self.progs) != 3:
            raise ValueError("a TripleInstance needs exactly three progressions")
        object.__setattr__(self, "progs", tuple(self.progs))
        if self.N < 6:
            raise ValueError(f"N must be >= 6 (smallest three-prime sum), got {self.N}")

    @property
    def moduli(self) -> tuple[int, int, int]:
        return tuple(p.k for p in self.progs)

    @property
    def residues(self) -> tuple[int, int, int]:
        return tuple(p.l for p in self.progs)


def triple(N: int, k1: int, l1: int, k2: int, l2: int, k3: int, l3: int) -> TripleInstance:
    """Shorthand constructor from raw moduli and residues."""
    return TripleInstance(N, (Progression(k1, l1), Progression(k2, l2), Progression(k3, l3)))


@dataclass(frozen=True)
class WeightedCount:
    """A log-weighted representation count plus the raw solution count.

    ``even_target`` flags targets N of even parity: the count is still
    well defined, but three odd primes can never reach an even N, so the
    value is dominated by degenerate triples involving p = 2.
    """

    value: float
    solutions: int
    even_target: bool = False


def _prime_arrays(N: int, prog: Progression, table: PrimeTable):
    p = table.primes_in_progression(N, prog)
    return p, np.log(p.astype(np.float64)) if p.size else np.empty(0)


def _indicator(N: int, prog: Progression, table: PrimeTable, weighted: bool) -> np.ndarray:
    p, logp = _prime_arrays(N, prog, table)
    a = np.zeros(N + 1, dtype=np.float64)
    if p.size:
        a[p] = logp if weighted else 1.0
    return a


def _fft_length(N: int) -> int:
    # next power of two >= 2N+2 so that linear convolution never wraps
    return 1 << (2 * N + 1).bit_length()


def count_direct(inst: TripleInstance, table: PrimeTable, cap: int = DIRECT_CAP) -> WeightedCount:
    """Exact R by enumerating prime pairs (p1, p2) and testing p3 = N - p1 - p2.

    The enumeration is quadratic in pi(N); the default cap keeps it in
    oracle territory.  Raise ``cap`` explicitly when a larger brute-force
    reference is wanted.
    """
    N = inst.N
    table.check_covers(N)
    if N > cap:
        raise ValueError(
            f"count_direct is capped at N <= {cap} (got N={N}); "
            f"use count_convolution for large targets"
        )
    prog1, prog2, prog3 = inst.progs
    p1s, log1s = _prime_arrays(N, prog1, table)
    p2s, log2s = _prime_arrays(N, prog2, table)
    is_p = table.is_prime_mask
    k3, l3 = prog3.k, prog3.l

    value = 0.0
    solutions = 0
    for p1, logp1 in zip(p1s.tolist(), log1s.tolist()):
        p3 = N - p1 - p2s
        ok = p3 >= 2
        if not ok.any():
            continue
        cand = p3[ok]
        good = is_p[cand] & (cand % k3 == l3)
        if not good.any():
            continue
        sel = cand[good]
        solutions += sel.size
        value += logp1 * float(np.dot(log2s[ok][good], np.log(sel.astype(np.float64))))
    return WeightedCount(value=value, solutions=solutions, even_target=N % 2 == 0)


def count_convolution(inst: TripleInstance, table: PrimeTable) -> WeightedCount:
    """R via real-input FFT convolution of the first two weighted indicators.

    Matches count_direct up to floating error (about 1e-12 relative at desk
    scale).  The unweighted count convolves 0/1 indicators and rounds each
    consumed entry, with a hard error if anything is further than
    ``ROUNDING_GUARD`` from an integer.
    """
    N = inst.N
    table.check_covers(N)
    prog1, prog2, prog3 = inst.progs
    M = _fft_length(N)

    a1 = _indicator(N, prog1, table, weighted=True)
    a2 = _indicator(N, prog2, table, weighted=True)
    c12 = np.fft.irfft(np.fft.rfft(a1, M) * np.fft.rfft(a2, M), M)

    p3s, log3s = _prime_arrays(N, prog3, table)
    if p3s.size == 0:
        return WeightedCount(0.0, 0, even_target=N % 2 == 0)
    value = float(np.dot(log3s, c12[N - p3s]))

    u1 = _indicator(N, prog1, table, weighted=False)
    u2 = _indicator(N, prog2, table, weighted=False)
    cu = np.fft.irfft(np.fft.rfft(u1, M) * np.fft.rfft(u2, M), M)
    raw = cu[N - p3s]
    rounded = np.rint(raw)
    drift = float(np.max(np.abs(raw - rounded)))
    if drift >= ROUNDING_GUARD:
        raise ConsistencyError(
            f"convolution count drifted {drift:.3e} from integrality at N={N}"
        )
    solutions = int(rounded.sum())
    if solutions == 0:
        value = 0.0  # empty sum; the float residue is pure FFT noise
    return WeightedCount(value=value, solutions=solutions, even_target=N % 2 == 0)


def pair_correlation(
    N: int,
    prog: Progression,
    n_lo: int,
    n_hi: int,
    table: PrimeTable,
    method: str = "conv",
    cap: int = DIRECT_CAP,
) -> dict[int, float]:
    """Log-weighted counts w(n) of prime pairs p1 - p2 = n with p1 constrained.

    w(n) = sum over p1, p2 <= N, p1 - p2 = n, p1 in the progression,
    of log(p1) * log(p2).  ``method="conv"`` cross-correlates the weighted
    indicators with one FFT; ``method="direct"`` is the quadratic oracle
    and obeys the same cap as count_direct.
    """
    table.check_covers(N)
    if n_lo > n_hi:
        raise ValueError(f"empty range: n_lo={n_lo} > n_hi={n_hi}")
    if abs(n_lo) > N or abs(n_hi) > N:
        raise ValueError(f"pair differences live in [-{N}, {N}], got [{n_lo}, {n_hi}]")

    if method == "direct":
        if N > cap:
            raise ValueError(f"direct pair correlation capped at N <= {cap}")
        p1s, log1s = _prime_arrays(N, prog, table)
        p2s, log2s = _prime_arrays(N, Progression(1, 0), table)
        out = {n: 0.0 for n in range(n_lo, n_hi + 1)}
        for p1, logp1 in zip(p1s.tolist(), log1s.tolist()):
            d = p1 - p2s
            ok = (d >= n_lo) & (d <= n_hi)
            for n, lg in zip(d[ok].tolist(), log2s[ok].tolist()):
                out[n] += logp1 * lg
        return out
    if method != "conv":
        raise ValueError(f"unknown method {method!r}")

    M = _fft_length(N)
    a1 = _indicator(N, prog, table, weighted=True)
    a2 = _indicator(N, Progression(1, 0), table, weighted=True)
    corr = np.fft.irfft(np.fft.rfft(a1, M) * np.conj(np.fft.rfft(a2, M)), M)
    # corr[m] = sum_j a1[j] a2[j - m mod M]; negative differences sit at M + n
    ns = np.arange(n_lo, n_hi + 1)
    return {int(n): float(corr[n % M]) for n in ns}
