"""The singular series and main term, built twice and cross-checked.

Two independent constructions of the arithmetic factor S in the main term

    M(N) = N^2 * S / (2 * phi(k1) * phi(k2) * phi(k3))

are provided.  The q-sum route sums, over moduli q up to a truncation,
restricted Gauss sums

    G(a, q; k, l) = sum of e(ab/q) over b mod q, gcd(b, q) = 1,
                    b = l mod gcd(k, q),

while the product route multiplies exact p-adic solution densities
sigma_p obtained by enumerating residues, in integer arithmetic, with no
analysis involved.  The two must agree; neither is trusted alone.

Conventions: S reduces to the classical ternary singular series when all
moduli are 1, and the q-sum carries the prefactor phi(k1)phi(k2)phi(k3)
so both routes share that normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import euler_phi, factorize, is_prime, moebius, padic_valuation
from .exceptions import ConsistencyError
from .repcount import TripleInstance, triple

__all__ = [
    "SingularSeriesValue",
    "gauss_sum_G",
    "singular_series_qsum",
    "local_density_factor",
    "singular_series_product",
    "classical_ternary_series",
    "classical_ternary_qsum",
    "main_term",
    "SingularSeriesCache",
    "DEFAULT_TRUNCATION",
]

# shared default for both truncation parameters (q_max and p_max)
DEFAULT_TRUNCATION = 2000

# magnitude allowed for the accumulated imaginary part of the q-sum,
# which is real by conjugate symmetry of the a-sum
IMAG_GUARD = 1e-9


@dataclass(frozen=True)
class SingularSeriesValue:
    """A truncated singular-series evaluation.

    ``q_truncation`` is the truncation parameter of whichever route
    produced the value (max modulus for the q-sum, max prime for the
    product).  ``tail_estimate`` is the summed magnitude of the last
    decade of terms (q-sum) or of |sigma_p - 1| over the last decade of
    primes (product): a crude but honest view of truncation quality.
    """

    value: float
    q_truncation: int
    tail_estimate: float


def gauss_sum_G(a: int, q: int, prog) -> complex:
    """Restricted Gauss sum G(a, q; k, l) by direct summation over units."""
    if math.gcd(a, q) != 1:
        raise ValueError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    g = math.gcd(prog.k, q)
    b = np.arange(q, dtype=np.int64)
    mask = (np.gcd(b, q) == 1) & (b % g == prog.l % g)
    if not mask.any():
        return 0j
    return complex(np.exp((2j * np.pi * (a % q) / q) * b[mask]).sum())


def _gauss_row(q: int, k: int, l: int) -> np.ndarray:
    """G(a, q; k, l) for every a mod q at once, via one length-q DFT."""
    g = math.gcd(k, q)
    b = np.arange(q, dtype=np.int64)
    v = ((np.gcd(b, q) == 1) & (b % g == l % g)).astype(np.float64)
    # numpy's FFT uses e(-ab/q); conjugating gives the e(+ab/q) convention
    return np.conj(np.fft.fft(v))


def _term_can_survive(q: int, moduli: tuple[int, int, int]) -> bool:
    # G(a, p^e; k, l) vanishes for all units a once e exceeds max(v_p(k), 1),
    # so q contributes only if every prime power in q clears all three bars.
    for p, e in factorize(q):
        if e > min(max(padic_valuation(k, p), 1) for k in moduli):
            return False
    return True


def singular_series_qsum(
    inst: TripleInstance, q_max: int = DEFAULT_TRUNCATION
) -> SingularSeriesValue:
    """Singular series as a truncated sum over moduli q of Gauss-sum products.

    value = phi(k1)phi(k2)phi(k3) *
            sum_{q <= q_max} sum_{a mod q, (a,q)=1} e(-aN/q) *
            prod_i G(a, q; k_i, l_i) / phi(lcm(k_i, q))

    The accumulated sum is real by conjugate symmetry; its imaginary part
    is checked against ``IMAG_GUARD`` and then discarded.
    """
    if q_max < 1:
        raise ValueError(f"q_max must be >= 1, got {q_max}")
    N = inst.N
    ks = inst.moduli
    ls = inst.residues
    prefactor = euler_phi(ks[0]) * euler_phi(ks[1]) * euler_phi(ks[2])

    total = 0.0 + 0.0j
    tail = 0.0
    tail_lo = q_max // 10
    for q in range(1, q_max + 1):
        if q > 1 and not _term_can_survive(q, ks):
            continue
        rows = [_gauss_row(q, k, l) for k, l in zip(ks, ls)]
        denom = 1
        for k in ks:
            denom *= euler_phi(math.lcm(k, q))
        a = np.arange(q, dtype=np.int64)
        unit = np.gcd(a, q) == 1
        phases = np.exp((-2j * np.pi * (N % q) / q) * a[unit])
        term = complex((phases * rows[0][unit] * rows[1][unit] * rows[2][unit]).sum()) / denom
        total += term
        if q > tail_lo:
            tail += abs(term)

    total *= prefactor
    if abs(total.imag) > IMAG_GUARD:
        raise ConsistencyError(
            f"q-sum imaginary residue {total.imag:.3e} exceeds {IMAG_GUARD}"
        )
    return SingularSeriesValue(
        value=float(total.real), q_truncation=q_max, tail_estimate=float(tail * prefactor)
    )


def local_density_factor(inst: TripleInstance, p: int, t: int) -> Fraction:
    """Exact p-adic solution density sigma_p(t), as a rational number.

    Counts triples (x1, x2, x3) mod p^t with x1 + x2 + x3 = N (mod p^t),
    each x_i a unit lying in its progression's class mod p^{v_p(k_i)},
    normalized so the density is 1 on average:

        sigma_p(t) = count * p^t / (|U1| * |U2| * |U3|).

    Enumeration is a pair convolution in int64 followed by a lookup of the
    forced third residue; everything stays exact.  ``t`` must be at least
    max_i v_p(k_i) + 1, past which sigma_p(t) is constant.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    vs = [padic_valuation(prog.k, p) for prog in inst.progs]
    t_min = max(vs) + 1
    if t < t_min:
        raise ValueError(
            f"t={t} below stabilization threshold {t_min} for p={p}"
        )
    M = p**t
    x = np.arange(M, dtype=np.int64)
    units = x % p != 0
    us = []
    for prog, v in zip(inst.progs, vs):
        m = units.copy()
        if v:
            pv = p**v
            m &= x % pv == prog.l % pv
        us.append(m.astype(np.int64))
    u1, u2, u3 = us

    lin = np.convolve(u1, u2)  # exact in int64
    pair = lin[:M].copy()
    pair[: M - 1] += lin[M:]
    count = int(pair @ u3[(inst.N - x) % M])
    sizes = [int(u.sum()) for u in us]
    return Fraction(count * M, sizes[0] * sizes[1] * sizes[2])


@lru_cache(maxsize=None)
def _primes_upto(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = b"\x00" * len(sieve[p * p :: p])
    return tuple(i for i in range(2, limit + 1) if sieve[i])


def _stabilized_threshold(inst: TripleInstance, p: int) -> int:
    return max(padic_valuation(prog.k, p) for prog in inst.progs) + 1


def singular_series_product(
    inst: TripleInstance, p_max: int = DEFAULT_TRUNCATION
) -> SingularSeriesValue:
    """Singular series as a truncated Euler product of exact local densities.

    Multiplies sigma_p at its stabilization threshold over all p <= p_max,
    exactly in rational arithmetic, reporting the result as a float.  A
    vanishing local density makes the value exactly zero.
    """
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    value = Fraction(1)
    tail = 0.0
    tail_lo = p_max // 10
    for p in _primes_upto(p_max):
        s = local_density_factor(inst, p, _stabilized_threshold(inst, p))
        if s == 0:
            return SingularSeriesValue(0.0, p_max, 0.0)
        value *= s
        if p > tail_lo:
            tail += abs(float(s) - 1.0)
    return SingularSeriesValue(float(value), p_max, tail)


def classical_ternary_series(N: int, p_max: int = DEFAULT_TRUNCATION) -> float:
    """Textbook unconstrained ternary singular series, truncated at p_max.

    prod_{p | N} (1 - 1/(p-1)^2) * prod_{p not | N} (1 + 1/(p-1)^3),
    over p <= p_max.  Used as an independent reference for the modulus-free
    case; note the p = 2 factor kills even N.
    """
    value = 1.0
    for p in _primes_upto(p_max):
        if N % p == 0:
            value *= 1.0 - 1.0 / (p - 1) ** 2
        else:
            value *= 1.0 + 1.0 / (p - 1) ** 3
    return value


def classical_ternary_qsum(N: int, q_max: int = DEFAULT_TRUNCATION) -> float:
    """Partial sum of the classical series form of the same object.

    sum_{q <= q_max} mu(q) c_q(N) / phi(q)^3 with the Ramanujan sum
    evaluated by its closed form c_q(N) = mu(q/g) phi(q) / phi(q/g),
    g = gcd(q, N).  This shares no code with the Gauss-sum route, so it is
    the truncation-matched oracle for singular_series_qsum at unit moduli.
    Beware that a series partial sum and the Euler product truncated at the
    same parameter differ by the omitted composite moduli (up to about
    1/phi(d)^2 when N has a divisor d just past q_max).
    """
    total = 0.0
    for q in range(1, q_max + 1):
        mu = moebius(q)
        if mu == 0:
            continue
        g = math.gcd(q, N)
        mu_cofactor = moebius(q // g)
        if mu_cofactor == 0:
            continue
        c_q = mu_cofactor * euler_phi(q) / euler_phi(q // g)
        total += mu * c_q / euler_phi(q) ** 3
    return total


def main_term(inst: TripleInstance, s: SingularSeriesValue) -> float:
    """Main term N^2 * S / (2 * phi(k1) phi(k2) phi(k3))."""
    ks = inst.moduli
    denom = 2 * euler_phi(ks[0]) * euler_phi(ks[1]) * euler_phi(ks[2])
    return inst.N**2 * s.value / denom


class SingularSeriesCache:
    """Per-target cache of unconstrained local densities for sweep reuse.

    For fixed N the density sigma_p only depends on the progressions at
    primes dividing some modulus, so a sweep over many (k, l) cells can
    reuse one base product over all p <= p_max and patch the handful of
    primes dividing k1 k2 k3.  Results are exactly the rationals that
    ``singular_series_product`` would produce, so values match that route
    bit for bit.
    """

    def __init__(self, N: int, p_max: int = DEFAULT_TRUNCATION):
        if p_max < 2:
            raise ValueError(f"p_max must be >= 2, got {p_max}")
        self.N = N
        self.p_max = p_max
        base_inst = triple(N, 1, 0, 1, 0, 1, 0)
        self._base: dict[int, Fraction] = {
            p: local_density_factor(base_inst, p, 1) for p in _primes_upto(p_max)
        }
        self._base_product = Fraction(1)
        self._base_tail = 0.0
        tail_lo = p_max // 10
        for p, s in self._base.items():
            self._base_product *= s
            if p > tail_lo:
                self._base_tail += abs(float(s) - 1.0)

    def series(self, inst: TripleInstance) -> SingularSeriesValue:
        if inst.N != self.N:
            raise ValueError(f"cache built for N={self.N}, got N={inst.N}")
        special = sorted(
            {p for k in inst.moduli for p, _ in factorize(k) if p <= self.p_max}
        )
        if self._base_product == 0:
            # only possible at p = 2 with N even, where every constrained
            # density vanishes as well: three units mod 2 sum to an odd class
            return SingularSeriesValue(0.0, self.p_max, 0.0)
        value = self._base_product
        tail = self._base_tail
        tail_lo = self.p_max // 10
        for p in special:
            s = local_density_factor(inst, p, _stabilized_threshold(inst, p))
            if s == 0:
                return SingularSeriesValue(0.0, self.p_max, 0.0)
            value = value / self._base[p] * s
            if p > tail_lo:
                tail += abs(float(s) - 1.0) - abs(float(self._base[p]) - 1.0)
        return SingularSeriesValue(float(value), self.p_max, tail)
