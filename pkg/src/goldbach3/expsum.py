"""Exponential sums over primes, grid extraction, and kernel integrals.

The basic sum is S(alpha) = sum over primes p <= N in a progression of
log(p) * e(alpha * p), with e(x) = exp(2 pi i x).  The weighted variant

    K(alpha) = sum over k <= k_max, gcd(k, l3) = 1,
               of lambda(k) * S_{k, l3 mod k}(alpha)

collapses to a single pass over primes once each prime carries the
coefficient c_p = log(p) * sum of lambda(k) over the k it satisfies.

Sampling at T >= 2N+1 equally spaced points turns every integral of a
product of these sums into an exact finite identity, because the
integrands are trigonometric polynomials of degree at most 2N (or 3N with
an alias-free coefficient pickup).  Genuine quadrature only appears for
the kernel min(H, 1/||gamma||), whose Fourier coefficients and the
companion integral J(n, k) have no such discretization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import quad

from .arcs import ArcPartition, classify_grid
from .arith import PrimeTable, Progression
from .exceptions import ConsistencyError
from .repcount import TripleInstance

__all__ = [
    "WeightSpec",
    "KernelCoefficients",
    "eval_S",
    "eval_S_grid",
    "weight_coefficients",
    "eval_K",
    "eval_K_grid",
    "coefficient_extract",
    "coefficient_extract_count",
    "kernel_coefficients",
    "J_integral",
    "MinorIntegral",
    "I_integral",
]

ROUNDING_GUARD = 1e-3
QUAD_TOL = 1e-9  # absolute accuracy target for kernel quadrature
# QUADPACK's error estimates run several orders conservative on these smooth
# pieces (actual errors sit at machine precision); only estimates past this
# guard indicate real non-convergence
QUAD_ERR_GUARD = 1e-6


def _e(x):
    return np.exp(2j * np.pi * x)


@dataclass(frozen=True)
class WeightSpec:
    """Real coefficients lambda(k), |lambda(k)| <= 1, tied to a residue l3.

    Entries at k with gcd(k, l3) != 1 are forced to zero on construction,
    since no primitive progression exists there.  ``lam[k]`` holds the
    coefficient for modulus k; ``lam[0]`` is unused.
    """

    l3: int
    lam: np.ndarray

    def __post_init__(self):
        if self.l3 < 0:
            raise ValueError(f"residue l3 must be nonnegative, got {self.l3}")
        lam = np.asarray(self.lam, dtype=np.float64).copy()
        if lam.ndim != 1 or lam.size < 2:
            raise ValueError("lam must be a 1-d array indexed by modulus k >= 1")
        if np.max(np.abs(lam)) > 1.0 + 1e-12:
            raise ValueError("weights must satisfy |lambda(k)| <= 1")
        lam[0] = 0.0
        for k in range(1, lam.size):
            if math.gcd(k, self.l3) != 1:
                lam[k] = 0.0
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def k_max(self) -> int:
        return self.lam.size - 1

    def active_moduli(self) -> list[int]:
        return [k for k in range(1, self.lam.size) if self.lam[k] != 0.0]

    @classmethod
    def from_map(cls, l3: int, mapping: dict[int, float]) -> "WeightSpec":
        k_max = max(mapping) if mapping else 1
        lam = np.zeros(k_max + 1)
        for k, v in mapping.items():
            if k < 1:
                raise ValueError(f"moduli must be positive, got {k}")
            lam[k] = v
        return cls(l3=l3, lam=lam)

    @classmethod
    def from_preset(cls, name: str, k_max: int, l3: int) -> "WeightSpec":
        """Named coefficient families: zero, unit, alternating, single:<k>."""
        if k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {k_max}")
        lam = np.zeros(k_max + 1)
        if name == "zero":
            pass
        elif name == "unit":
            lam[1:] = 1.0
        elif name == "alternating":
            ks = np.arange(k_max + 1)
            lam = np.where(ks % 2 == 0, 1.0, -1.0).astype(np.float64)
        elif name.startswith("single:"):
            k = int(name.split(":", 1)[1])
            if not 1 <= k <= k_max:
                raise ValueError(f"single:{k} outside 1..{k_max}")
            lam[k] = 1.0
        else:
            raise ValueError(f"unknown weight preset {name!r}")
        return cls(l3=l3, lam=lam)

    @classmethod
    def from_file(cls, path, l3: int) -> "WeightSpec":
        """Load `k value` lines; blank lines and #-comments are skipped."""
        mapping: dict[int, float] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise ValueError(f"expected 'k value' per line, got {raw!r}")
                mapping[int(parts[0])] = float(parts[1])
        if not mapping:
            raise ValueError(f"no weights found in {path}")
        return cls.from_map(l3, mapping)


def eval_S(alpha: float, N: int, prog: Progression, table: PrimeTable) -> complex:
    """S(alpha) = sum of log(p) e(alpha p) over primes p <= N in the progression."""
    p = table.primes_in_progression(N, prog)
    if p.size == 0:
        return 0j
    logp = np.log(p.astype(np.float64))
    return complex(np.dot(logp, _e(alpha * p)))


def eval_S_grid(N: int, prog: Progression, table: PrimeTable, T: int) -> np.ndarray:
    """S at all grid points t/T, t = 0..T-1, via one length-T FFT."""
    if T < N + 1:
        raise ValueError(f"grid too short: T={T} must exceed N={N}")
    p = table.primes_in_progression(N, prog)
    a = np.zeros(T)
    if p.size:
        a[p] = np.log(p.astype(np.float64))
    return np.conj(np.fft.fft(a))


def weight_coefficients(N: int, w: WeightSpec, table: PrimeTable):
    """Per-prime coefficients c_p = log(p) * sum of lambda(k) over k | (p - l3).

    The k-sum for all p <= N at once is a progression sieve: each active
    modulus k adds lambda(k) along the class l3 mod k, costing
    sum_k N/k = O(N log k_max) vectorized slice updates in total.
    Returns (primes, c_p) as aligned arrays.
    """
    table.check_covers(N)
    acc = np.zeros(N + 1)
    for k in w.active_moduli():
        acc[w.l3 % k :: k] += w.lam[k]
    p = table.primes_in_progression(N, Progression(1, 0))
    return p, np.log(p.astype(np.float64)) * acc[p]


def eval_K(alpha: float, N: int, w: WeightSpec, table: PrimeTable) -> complex:
    """K(alpha) in a single pass over primes with precomputed coefficients."""
    p, c = weight_coefficients(N, w, table)
    if p.size == 0:
        return 0j
    return complex(np.dot(c, _e(alpha * p)))


def eval_K_grid(N: int, w: WeightSpec, table: PrimeTable, T: int) -> np.ndarray:
    """K at all grid points t/T via one FFT of the coefficient array."""
    if T < N + 1:
        raise ValueError(f"grid too short: T={T} must exceed N={N}")
    p, c = weight_coefficients(N, w, table)
    a = np.zeros(T)
    if p.size:
        a[p] = c
    return np.conj(np.fft.fft(a))


def _grid_T(N: int, T: Optional[int]) -> int:
    if T is None:
        T = 2 * N + 1
    if T <= 2 * N:
        raise ValueError(f"T={T} aliases the coefficient at N; need T >= 2N+1")
    return T


def coefficient_extract(
    N: int,
    inst: TripleInstance,
    table: PrimeTable,
    T: Optional[int] = None,
    unit_weights: bool = False,
) -> float:
    """R as the N-th Fourier coefficient of S1*S2*S3 on a T-point grid.

    (1/T) sum_t S1 S2 S3 e(-N t/T) is exact for T >= 2N+1: the product is
    a trigonometric polynomial supported on [6, 3N], and the aliases of N
    (N +- T, ...) fall outside that support.
    """
    if inst.N != N:
        raise ValueError(f"instance target {inst.N} does not match N={N}")
    T = _grid_T(N, T)
    table.check_covers(N)
    prod = np.ones(T, dtype=np.complex128)
    for prog in inst.progs:
        if unit_weights:
            p = table.primes_in_progression(N, prog)
            a = np.zeros(T)
            a[p] = 1.0
            prod *= np.conj(np.fft.fft(a))
        else:
            prod *= eval_S_grid(N, prog, table, T)
    phases = _e(-N * np.arange(T) / T)
    return float((prod @ phases).real) / T


def coefficient_extract_count(
    N: int, inst: TripleInstance, table: PrimeTable, T: Optional[int] = None
) -> int:
    """Unweighted ordered-triple count via unit-weight extraction, rounded."""
    raw = coefficient_extract(N, inst, table, T=T, unit_weights=True)
    rounded = round(raw)
    if abs(raw - rounded) >= ROUNDING_GUARD:
        raise ConsistencyError(f"grid count drifted {abs(raw - rounded):.3e} from integrality")
    return int(rounded)


@dataclass(frozen=True)
class KernelCoefficients:
    """Fourier coefficients c(h) of the sawtooth cap min(H, 1/||gamma||).

    The kernel is even, so c(h) = c(-h) and only h >= 0 is stored;
    ``coeff`` handles the mirroring.
    """

    H: float
    h_max: int
    values: np.ndarray  # values[h] = c(h) for h = 0..h_max

    def coeff(self, h: int) -> float:
        if abs(h) > self.h_max:
            raise ValueError(f"|h|={abs(h)} beyond computed range {self.h_max}")
        return float(self.values[abs(h)])

    @cached_property
    def envelope_ok(self) -> bool:
        """|c(h)| <= 4*min(log H, H^2/h^2) for every computed h."""
        h = np.arange(self.h_max + 1, dtype=np.float64)
        bound = np.full_like(h, 4.0 * math.log(self.H))
        nz = h > 0
        bound[nz] = np.minimum(bound[nz], 4.0 * self.H**2 / h[nz] ** 2)
        return bool(np.all(np.abs(self.values) <= bound))


def kernel_coefficients(
    H: float, h_max: Optional[int] = None, quad_limit: int = 200
) -> KernelCoefficients:
    """Compute c(h) = integral over [0,1] of min(H, 1/||gamma||) e(-h gamma).

    The kernel is split at its corners: flat top of height H on
    [0, 1/H] and [1 - 1/H, 1], reciprocal 1/gamma and 1/(1-gamma) between.
    By evenness c(h) = 2 * (flat + oscillatory) with both halves taken on
    [0, 1/2]; the flat part has an elementary antiderivative and the
    reciprocal part goes to adaptive quadrature with an oscillatory cosine
    weight, to absolute tolerance QUAD_TOL.
    """
    if H <= 1:
        raise ValueError(f"kernel height H must exceed 1, got {H}")
    if h_max is None:
        h_max = math.ceil(10 * H)
    if h_max < 0:
        raise ValueError(f"h_max must be nonnegative, got {h_max}")

    cut = 1.0 / H
    values = np.empty(h_max + 1)
    flat0, err0 = quad(lambda g: H, 0.0, cut, epsabs=1e-13, limit=quad_limit)
    osc0, err1 = quad(lambda g: 1.0 / g, cut, 0.5, epsabs=1e-13, limit=quad_limit)
    values[0] = 2.0 * (flat0 + osc0)
    worst = err0 + err1
    for h in range(1, h_max + 1):
        wv = 2.0 * np.pi * h
        flat = H * math.sin(wv * cut) / wv
        osc, err = quad(
            lambda g: 1.0 / g,
            cut,
            0.5,
            weight="cos",
            wvar=wv,
            epsabs=1e-12,
            epsrel=1e-12,
            limit=quad_limit,
        )
        values[h] = 2.0 * (flat + osc)
        worst = max(worst, err)
    if worst > QUAD_ERR_GUARD:
        raise ConsistencyError(
            f"kernel quadrature error estimate {worst:.2e} > {QUAD_ERR_GUARD}"
        )
    return KernelCoefficients(H=float(H), h_max=h_max, values=values)


def J_integral(n: int, k: int, H: float, quad_limit: int = 200) -> float:
    """J(n, k) = integral over [0,1] of e(n gamma) min(H, 1/||gamma k||).

    Integrated numerically, one period of the dilated kernel at a time,
    keeping the e(n gamma) phase inside the integrand.  The imaginary part
    vanishes by the kernel's evenness, so only the cosine integral is
    computed.  Analytically this collapses to c(-n/k) when k divides n and
    to 0 otherwise; that collapse is left to the tests as a cross-check.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if H <= 1:
        raise ValueError(f"kernel height H must exceed 1, got {H}")

    cut = 1.0 / H

    def integrand(g: float) -> float:
        z = (g * k) % 1.0
        d = min(z, 1.0 - z)
        return math.cos(2.0 * np.pi * n * g) * (H if d <= cut else 1.0 / d)

    total = 0.0
    for j in range(k):
        lo = j / k
        hi = (j + 1) / k
        breaks = [lo + cut / k, lo + 0.5 / k, hi - cut / k]
        val, _ = quad(
            integrand,
            lo,
            hi,
            points=breaks,
            limit=quad_limit,
            epsabs=1e-11,
            epsrel=1e-11,
        )
        total += val
    return total


class MinorIntegral(NamedTuple):
    value: complex
    boundary_fraction: float


def I_integral(
    r: int,
    N: int,
    prog: Progression,
    w: WeightSpec,
    partition: Optional[ArcPartition],
    T: Optional[int],
    table: PrimeTable,
) -> MinorIntegral:
    """Diagnostic minor-arc integral of S * K * e((r - N) alpha) on the grid.

    Sums (1/T) S(t/T) K(t/T) e((r-N) t/T) over minor-classified grid
    points (over all points when ``partition`` is None).  The minor set is
    not grid-aligned, so the value is approximate; ``boundary_fraction``
    reports how many grid cells straddle an arc boundary, over T.
    """
    T = _grid_T(N, T)
    if partition is not None and partition.N != N:
        raise ValueError(f"partition built for N={partition.N}, not N={N}")
    svals = eval_S_grid(N, prog, table, T)
    kvals = eval_K_grid(N, w, table, T)
    phases = _e((r - N) * np.arange(T) / T)
    terms = svals * kvals * phases
    if partition is None:
        return MinorIntegral(value=complex(terms.sum() / T), boundary_fraction=0.0)
    labels = classify_grid(partition, T)
    minor = labels < 0
    crossings = int(np.count_nonzero(labels != np.roll(labels, -1)))
    value = complex(terms[minor].sum() / T) if minor.any() else 0j
    return MinorIntegral(value=value, boundary_fraction=crossings / T)
