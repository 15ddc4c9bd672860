"""Prime sieving and elementary multiplicative functions.

Everything downstream (representation counts, singular series, exponential
sums) reads primes out of one shared smallest-prime-factor table.  Storing
the smallest prime factor instead of a plain primality bit makes the
factorization of any n <= limit an O(log n) walk, which is what the
totient, divisor and Moebius functions as well as the local densities need.
All logarithms are natural logs in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .exceptions import TableTooSmallError

__all__ = [
    "Progression",
    "PrimeTable",
    "sieve_primes",
    "factorize",
    "padic_valuation",
    "is_prime",
    "euler_phi",
    "divisor_tau",
    "divisor_tau_array",
    "moebius",
    "chebyshev_theta",
]


@dataclass(frozen=True)
class Progression:
    """A residue class l (mod k) with gcd(k, l) = 1.

    The residue is stored reduced mod k, so (1, 0) is the canonical
    "no constraint" progression rather than a special case.
    """

    k: int
    l: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"modulus must be a positive integer, got k={self.k}")
        object.__setattr__(self, "l", self.l % self.k)
        if math.gcd(self.k, self.l) != 1:
            raise ValueError(
                f"progression ({self.k}, {self.l}) is not primitive: "
                f"gcd(k, l) = {math.gcd(self.k, self.l)}"
            )

    def contains(self, n: int) -> bool:
        return n % self.k == self.l


UNCONSTRAINED = Progression(1, 0)


@dataclass(frozen=True)
class PrimeTable:
    """Smallest-prime-factor table for the integers 2..limit.

    ``spf[n]`` is the smallest prime dividing n (``spf[0] = spf[1] = 0``),
    and n is prime exactly when ``spf[n] == n``.  Instances are immutable
    after construction and safe to share across threads.
    """

    limit: int
    spf: np.ndarray

    @cached_property
    def is_prime_mask(self) -> np.ndarray:
        """Boolean array of length limit+1, True at primes."""
        mask = self.spf == np.arange(self.limit + 1, dtype=self.spf.dtype)
        mask[:2] = False
        mask.setflags(write=False)
        return mask

    @cached_property
    def primes(self) -> np.ndarray:
        """Sorted array of all primes <= limit."""
        p = np.flatnonzero(self.is_prime_mask)
        p.setflags(write=False)
        return p

    @cached_property
    def log_primes(self) -> np.ndarray:
        """Natural logs of ``primes``, aligned elementwise."""
        lp = np.log(self.primes.astype(np.float64))
        lp.setflags(write=False)
        return lp

    def check_covers(self, n: int) -> None:
        if n > self.limit:
            raise TableTooSmallError(
                f"need primes up to {n} but table only covers {self.limit}"
            )

    def primes_in_progression(self, limit: int, prog: Progression) -> np.ndarray:
        """Primes p <= limit with p in the given progression."""
        self.check_covers(limit)
        p = self.primes
        p = p[: np.searchsorted(p, limit, side="right")]
        if prog.k == 1:
            return p
        return p[p % prog.k == prog.l]

    def factorize(self, n: int) -> list[tuple[int, int]]:
        """Factor n <= limit via smallest-prime-factor chasing."""
        self.check_covers(n)
        if n < 1:
            raise ValueError(f"cannot factor {n}")
        out: list[tuple[int, int]] = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out


def sieve_primes(limit: int) -> PrimeTable:
    """Build the smallest-prime-factor table for 2..limit.

    Cost is O(limit log log limit): one pass per prime p <= sqrt(limit),
    marking only multiples that no smaller prime has claimed.
    """
    if limit < 2:
        raise ValueError(f"sieve limit must be >= 2, got {limit}")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    # anything still unmarked above 1 is prime
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    spf.setflags(write=False)
    return PrimeTable(limit=limit, spf=spf)


def factorize(n: int) -> list[tuple[int, int]]:
    """Factor a positive integer by trial division.

    Fine for the modulus-sized arguments (k, q <= a few thousand) this
    package feeds it; bulk factorization should go through a PrimeTable.
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: list[tuple[int, int]] = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    d = 5
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 2 if d % 6 == 5 else 4
    if n > 1:
        out.append((n, 1))
    return out


def padic_valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n (n >= 1)."""
    if n < 1:
        raise ValueError(f"valuation undefined for {n}")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    """Trial-division primality check for small n."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    """Euler's totient: the number of 1 <= m <= n coprime to n."""
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    phi = 1
    for p, e in factorize(n):
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisor_tau(n: int) -> int:
    """Number of positive divisors of n."""
    if n < 1:
        raise ValueError(f"divisor_tau needs n >= 1, got {n}")
    tau = 1
    for _, e in factorize(n):
        tau *= e + 1
    return tau


def divisor_tau_array(limit: int) -> np.ndarray:
    """Divisor counts for 0..limit by a divisor sieve (tau[0] = 0)."""
    if limit < 1:
        raise ValueError(f"divisor_tau_array needs limit >= 1, got {limit}")
    tau = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        tau[d::d] += 1
    return tau


def moebius(n: int) -> int:
    """Moebius function: 0 on squarefull n, else (-1)^(number of prime factors)."""
    if n < 1:
        raise ValueError(f"moebius needs n >= 1, got {n}")
    mu = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        mu = -mu
    return mu


def chebyshev_theta(limit: int, prog: Progression, table: PrimeTable) -> float:
    """Sum of log p over primes p <= limit with p in the progression."""
    p = table.primes_in_progression(limit, prog)
    return float(np.log(p.astype(np.float64)).sum()) if p.size else 0.0
