import math
import random
from fractions import Fraction

import pytest

from goldbach3 import (
    Progression,
    SingularSeriesCache,
    classical_ternary_qsum,
    classical_ternary_series,
    count_convolution,
    gauss_sum_G,
    local_density_factor,
    main_term,
    moebius,
    singular_series_product,
    singular_series_qsum,
    triple,
)
from conftest import random_instance


class TestGaussSum:
    def test_q1_is_one(self):
        assert gauss_sum_G(1, 1, Progression(1, 0)) == pytest.approx(1.0)

    def test_one_term_sum(self):
        # q=4, k=4, l=1: only b=1 qualifies, giving e(1/4) = i
        assert gauss_sum_G(1, 4, Progression(4, 1)) == pytest.approx(1j)

    def test_ramanujan_reduction(self):
        # with no progression constraint the sum over units is mu(q)
        for q in range(1, 201):
            for a in range(1, q + 1):
                if math.gcd(a, q) == 1:
                    g = gauss_sum_G(a, q, Progression(1, 0))
                    assert abs(g - moebius(q)) < 1e-10

    def test_rejects_noncoprime(self):
        with pytest.raises(ValueError):
            gauss_sum_G(2, 4, Progression(1, 0))

    def test_fft_batch_matches_direct_sum(self):
        # the q-sum engine evaluates all residues a at once via one DFT;
        # the direct unit-by-unit sum is its oracle
        from goldbach3.singular import _gauss_row

        for q in (1, 2, 7, 12, 16, 45):
            for k, l in ((1, 0), (4, 1), (6, 5), (9, 4)):
                row = _gauss_row(q, k, l)
                for a in range(q):
                    if math.gcd(a, q) == 1:
                        direct = gauss_sum_G(a, q, Progression(k, l))
                        assert abs(row[a] - direct) < 1e-10


class TestLocalDensity:
    def test_generic_prime(self):
        inst = triple(9, 1, 0, 1, 0, 1, 0)
        assert local_density_factor(inst, 5, 1) == Fraction(1) + Fraction(1, 4**3)
        assert local_density_factor(inst, 3, 1) == Fraction(3, 4)  # 3 | 9

    def test_parity_obstruction(self):
        inst = triple(10**4, 1, 0, 1, 0, 1, 0)
        assert local_density_factor(inst, 2, 1) == 0

    def test_stabilization_random_suite(self):
        rng = random.Random(55)
        primes = [p for p in range(2, 51) if all(p % d for d in range(2, p))]
        for _ in range(20):
            inst = random_instance(rng, 100, 10**5, 20)
            for p in primes:
                t = max(_vp(prog.k, p) for prog in inst.progs) + 1
                assert local_density_factor(inst, p, t) == local_density_factor(inst, p, t + 1)

    def test_threshold_validation(self):
        inst = triple(100, 4, 1, 1, 0, 1, 0)
        with pytest.raises(ValueError):
            local_density_factor(inst, 2, 2)  # needs t >= v_2(4) + 1 = 3
        with pytest.raises(ValueError):
            local_density_factor(inst, 4, 1)  # not prime


def _vp(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class TestQSum:
    def test_truncation_one(self):
        s = singular_series_qsum(triple(101, 3, 1, 4, 3, 5, 2), 1)
        assert s.value == pytest.approx(1.0, abs=1e-12)

    def test_matches_classical_series_partial_sum(self):
        # truncation-matched oracle: Ramanujan sums by closed form
        for N in (101, 9973, 82713, 100003):
            qs = singular_series_qsum(triple(N, 1, 0, 1, 0, 1, 0), 2000)
            assert qs.value == pytest.approx(classical_ternary_qsum(N, 2000), abs=1e-12)

    def test_partial_sums_approach_classical_product(self):
        for N in (101, 9973, 100003):
            qs = singular_series_qsum(triple(N, 1, 0, 1, 0, 1, 0), 2000)
            assert qs.value == pytest.approx(classical_ternary_series(N, 2000), abs=2e-6)

    def test_even_target_collapses(self):
        qs = singular_series_qsum(triple(10**4, 1, 0, 1, 0, 1, 0), 2000)
        assert abs(qs.value) < 1e-3
        # the q = 2 term cancels the q = 1 term exactly
        qs2 = singular_series_qsum(triple(10**4, 1, 0, 1, 0, 1, 0), 2)
        assert qs2.value == pytest.approx(0.0, abs=1e-12)

    def test_tail_reported(self):
        s = singular_series_qsum(triple(101, 1, 0, 1, 0, 1, 0), 500)
        assert s.tail_estimate >= 0.0
        assert s.q_truncation == 500


class TestProduct:
    def test_small_prefix(self):
        # N=9: (1 + 1) at p=2 times (1 - 1/4) at p=3
        inst = triple(9, 1, 0, 1, 0, 1, 0)
        s2 = local_density_factor(inst, 2, 1)
        s3 = local_density_factor(inst, 3, 1)
        assert s2 * s3 == Fraction(3, 2)

    def test_matches_classical(self):
        for N in (101, 9973):
            pr = singular_series_product(triple(N, 1, 0, 1, 0, 1, 0), 2000)
            assert pr.value == pytest.approx(classical_ternary_series(N, 2000), rel=1e-12)

    def test_vanishing_factor_zeroes_value(self):
        pr = singular_series_product(triple(10**4, 1, 0, 1, 0, 1, 0), 100)
        assert pr.value == 0.0

    def test_positive_when_all_factors_positive(self):
        rng = random.Random(77)
        for _ in range(10):
            inst = random_instance(rng, 51, 10**4, 10, odd=True)
            pr = singular_series_product(inst, 200)
            if pr.value != 0.0:
                assert pr.value > 0.0


class TestCrossRoute:
    def test_agreement_random_suite(self):
        rng = random.Random(4242)
        for _ in range(10):
            inst = random_instance(rng, 1001, 10**5, 20, odd=True)
            qs = singular_series_qsum(inst, 500)
            pr = singular_series_product(inst, 500)
            assert abs(qs.value - pr.value) <= 2e-3 * max(pr.value, 1.0)

    def test_conjugate_symmetry_never_trips(self):
        # the imaginary-part guard stays silent across a spread of instances
        rng = random.Random(11)
        for _ in range(10):
            inst = random_instance(rng, 100, 5000, 12)
            singular_series_qsum(inst, 300)


class TestMainTerm:
    def test_zero_series(self):
        inst = triple(10**4, 1, 0, 1, 0, 1, 0)
        assert main_term(inst, singular_series_product(inst, 100)) == 0.0

    def test_unit_moduli_shape(self):
        inst = triple(10001, 1, 0, 1, 0, 1, 0)
        s = singular_series_product(inst, 300)
        assert main_term(inst, s) == pytest.approx(10001**2 * s.value / 2)

    def test_ratio_band_constrained(self, table_1e5):
        inst = triple(10**5 + 3, 3, 1, 4, 1, 1, 0)
        m = main_term(inst, singular_series_product(inst, 2000))
        r = count_convolution(inst, table_1e5).value
        assert 0.8 <= r / m <= 1.2


class TestCache:
    def test_matches_direct_product_exactly(self):
        rng = random.Random(909)
        cache = SingularSeriesCache(10001, 300)
        for _ in range(8):
            inst = random_instance(rng, 10001, 10001, 15)
            direct = singular_series_product(inst, 300)
            via_cache = cache.series(inst)
            assert via_cache.value == direct.value  # bit-identical rationals

    def test_even_target_short_circuits(self):
        cache = SingularSeriesCache(10**4, 300)
        assert cache.series(triple(10**4, 3, 1, 1, 0, 1, 0)).value == 0.0

    def test_rejects_other_target(self):
        cache = SingularSeriesCache(1001, 100)
        with pytest.raises(ValueError):
            cache.series(triple(1003, 1, 0, 1, 0, 1, 0))
