import math
import random

import numpy as np
import pytest

from goldbach3 import (
    Progression,
    chebyshev_theta,
    divisor_tau,
    divisor_tau_array,
    euler_phi,
    factorize,
    moebius,
    sieve_primes,
)


def trial_division_primes(limit):
    out = []
    for n in range(2, limit + 1):
        if all(n % d for d in range(2, int(math.isqrt(n)) + 1)):
            out.append(n)
    return out


class TestSieve:
    def test_small_cases(self):
        t = sieve_primes(10)
        assert t.primes.tolist() == [2, 3, 5, 7]
        assert sieve_primes(2).primes.tolist() == [2]

    def test_against_trial_division(self):
        t = sieve_primes(100)
        assert t.primes.size == 25
        assert t.primes.tolist() == trial_division_primes(100)

    def test_spf_invariants(self):
        t = sieve_primes(5000)
        spf = t.spf
        for n in range(2, 5001, 37):
            p = int(spf[n])
            assert n % p == 0
            assert all(n % q for q in trial_division_primes(p - 1))
            assert spf[p] == p  # spf values are themselves prime

    def test_prime_iff_spf_self(self):
        t = sieve_primes(300)
        ref = set(trial_division_primes(300))
        for n in range(2, 301):
            assert (int(t.spf[n]) == n) == (n in ref)

    def test_prefix_consistency(self):
        big = sieve_primes(2500)
        small = sieve_primes(700)
        assert np.array_equal(big.spf[:701], small.spf)

    def test_rejects_tiny_limit(self):
        with pytest.raises(ValueError):
            sieve_primes(1)


class TestProgression:
    def test_reduces_residue(self):
        assert Progression(4, 9).l == 1
        assert Progression(1, 7).l == 0

    def test_rejects_imprimitive(self):
        with pytest.raises(ValueError):
            Progression(2, 0)
        with pytest.raises(ValueError):
            Progression(6, 3)

    def test_unconstrained_is_valid(self):
        p = Progression(1, 0)
        assert p.contains(17)


class TestMultiplicativeFunctions:
    @pytest.mark.parametrize("n,expected", [(1, 1), (12, 4), (97, 96)])
    def test_phi_values(self, n, expected):
        assert euler_phi(n) == expected

    @pytest.mark.parametrize("n,expected", [(1, 1), (12, 6), (36, 9)])
    def test_tau_values(self, n, expected):
        assert divisor_tau(n) == expected

    @pytest.mark.parametrize("n,expected", [(1, 1), (6, 1), (12, 0), (30, -1)])
    def test_moebius_values(self, n, expected):
        assert moebius(n) == expected

    def test_zero_rejected(self):
        for fn in (euler_phi, divisor_tau, moebius, factorize):
            with pytest.raises(ValueError):
                fn(0)

    def test_multiplicativity_on_random_coprime_pairs(self):
        rng = random.Random(101)
        done = 0
        while done < 200:
            m = rng.randrange(1, 10**4)
            n = rng.randrange(1, 10**4)
            if math.gcd(m, n) != 1:
                continue
            assert euler_phi(m * n) == euler_phi(m) * euler_phi(n)
            assert divisor_tau(m * n) == divisor_tau(m) * divisor_tau(n)
            done += 1

    def test_phi_divisor_sum_identity(self):
        # sum of phi(d) over d | n equals n
        limit = 10**4
        acc = np.zeros(limit + 1, dtype=np.int64)
        for d in range(1, limit + 1):
            acc[d::d] += euler_phi(d)
        assert np.array_equal(acc[1:], np.arange(1, limit + 1))

    def test_tau_fourth_moment_ratio(self):
        # sum tau^4(n) grows no faster than X log^15 X, and at desk scale the
        # normalized ratio is still dropping as X grows
        tau = divisor_tau_array(10**6).astype(np.float64)
        t4 = tau**4
        ratios = []
        for X in (10**4, 10**5, 10**6):
            ratios.append(float(t4[1 : X + 1].sum()) / (X * math.log(X) ** 15))
        assert ratios[0] > ratios[1] > ratios[2]
        assert ratios[0] < 1.0


class TestChebyshevTheta:
    def test_unconstrained(self, table_small):
        expect = math.log(2) + math.log(3) + math.log(5) + math.log(7)
        assert chebyshev_theta(10, Progression(1, 0), table_small) == pytest.approx(expect)

    def test_progressions_mod_4(self, table_small):
        assert chebyshev_theta(10, Progression(4, 1), table_small) == pytest.approx(math.log(5))
        assert chebyshev_theta(10, Progression(4, 3), table_small) == pytest.approx(
            math.log(3) + math.log(7)
        )

    def test_table_too_small(self, table_small):
        from goldbach3 import TableTooSmallError

        with pytest.raises(TableTooSmallError):
            chebyshev_theta(5000, Progression(1, 0), table_small)
