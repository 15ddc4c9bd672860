import math
import random

import pytest

from goldbach3 import sieve_primes


@pytest.fixture(scope="session")
def table_small():
    return sieve_primes(3000)


@pytest.fixture(scope="session")
def table_10k():
    return sieve_primes(21000)


@pytest.fixture(scope="session")
def table_1e5():
    return sieve_primes(110000)


@pytest.fixture(scope="session")
def table_big():
    return sieve_primes(1_000_100)


def random_progression(rng: random.Random, k_max: int):
    k = rng.randrange(1, k_max + 1)
    l = rng.choice([l for l in range(k) if math.gcd(k, l) == 1])
    return k, l


def random_instance(rng: random.Random, n_lo: int, n_hi: int, k_max: int, odd=False):
    from goldbach3 import triple

    N = rng.randrange(n_lo, n_hi + 1)
    if odd and N % 2 == 0:
        N += 1
    progs = [random_progression(rng, k_max) for _ in range(3)]
    return triple(N, *[x for pair in progs for x in pair])
