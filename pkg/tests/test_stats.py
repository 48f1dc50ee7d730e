"""Arithmetic functions, sieve, expansion comparator, and estimators."""

import math
from fractions import Fraction

import pytest

from fixedpoint_lab import errors, stats
from fixedpoint_lab.stats import (
    avg_estimator,
    density_estimator,
    expansion_comparator,
    iter_primes,
    local_maximality_density,
    omega,
    prime_count,
    sigma1p,
    sum_first_primes,
    sum_primes_asymptotic,
    sum_primes_exact,
)


class TestArithmeticFunctions:
    def test_omega_examples(self):
        assert omega(30) == 2  # odd prime divisors {3, 5}
        assert omega(128) == 0  # power of 2
        assert omega(30, min_prime=2) == 3

    def test_prime_count_examples(self):
        assert prime_count(10) == 4
        assert prime_count(1) == 0
        assert prime_count(210) == 46

    def test_sigma1p_examples(self):
        assert sigma1p(30) == 8  # 3 + 5
        assert sigma1p(30030) == 39  # 3 + 5 + 7 + 11 + 13
        assert sigma1p(8) == 0

    def test_sum_primes_exact_examples(self):
        assert sum_primes_exact(10) == 15  # 3 + 5 + 7
        assert sum_primes_exact(100) == 1058  # 1060 including 2
        assert sum_primes_exact(3) == 3

    def test_sum_primes_exact_cap(self):
        with pytest.raises(errors.SieveCapExceeded):
            sum_primes_exact(10**9)

    def test_sum_primes_matches_naive(self):
        naive = sum(p for p in range(3, 500) if all(p % d for d in range(2, p)))
        assert sum_primes_exact(499) == naive

    def test_prime_count_matches_naive(self):
        naive = sum(1 for p in range(2, 1000) if all(p % d for d in range(2, p)))
        assert prime_count(999) == naive

    def test_segmented_agrees_with_simple(self):
        # force the segmented path and compare against the small sieve
        bound = stats._SMALL_SIEVE + 5000
        segmented = list(iter_primes(bound))
        assert segmented[:10] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        assert prime_count(bound) == len(segmented)

    def test_sum_first_primes(self):
        assert sum_first_primes(3, start=3) == 3 + 5 + 7
        assert sum_first_primes(1, start=2) == 2

    def test_omega_bound_over_range(self):
        # omega(c) <= log c / log 2 for 3 <= c <= 10^5 via an omega sieve
        limit = 10**5
        table = [0] * (limit + 1)
        for p in iter_primes(limit):
            if p < 3:
                continue
            for multiple in range(p, limit + 1, p):
                table[multiple] += 1
        log2 = math.log(2)
        for c in range(3, limit + 1):
            assert table[c] <= math.log(c) / log2
        # spot-check the sieve against the factorization route
        for c in (3, 4, 30, 210, 2310, 65536, 99990):
            assert omega(c) == table[c]

    def test_sigma1p_below_full_sum(self):
        for c in range(3, 400):
            assert sigma1p(c) <= sum_primes_exact(c)


class TestExpansion:
    def test_positive_from_16(self):
        for c in (16, 17, 100, 10**5):
            assert sum_primes_asymptotic(c) > 0

    def test_domain(self):
        with pytest.raises(errors.DomainTooSmall):
            sum_primes_asymptotic(15)

    def test_comparator_tolerances(self):
        small = expansion_comparator(10**3)
        big = expansion_comparator(10**6)
        assert big.rel_error < 0.10
        assert big.rel_error < small.rel_error

    def test_comparator_exact_side(self):
        rep = expansion_comparator(100)
        assert rep.sum_first_c == sum_first_primes(100, start=3)
        assert rep.sum_range == sum_primes_exact(100)


class TestLocalDensity:
    def test_examples(self):
        assert local_maximality_density(3) == Fraction(8, 9)
        assert local_maximality_density(5) == Fraction(24, 25)

    def test_tends_to_one(self):
        eps = 1e-4
        p = 101  # first prime above 1/sqrt(eps) = 100
        assert local_maximality_density(p) > 1 - eps

    def test_rejects_nonprime(self):
        with pytest.raises(errors.NotPrime):
            local_maximality_density(9)
        with pytest.raises(errors.NotPrime):
            local_maximality_density(2)


class TestAverages:
    @pytest.mark.parametrize(
        "setting,expected",
        [("7.5a", 1), ("7.5b", 2), ("7.5c", 0), ("cor6.1a", 1), ("cor6.1b", 2),
         ("cor6.1c", 0)],
    )
    def test_constant_settings(self, setting, expected):
        for bound in (10, 100, 2000):
            rep = avg_estimator(setting, bound)
            assert rep.value == expected
            assert rep.numerator == expected * rep.denominator

    @pytest.mark.parametrize("setting", ["7.1a", "7.3a", "co6a"])
    def test_nondividing_average_is_zero(self, setting):
        rep = avg_estimator(setting, 500)
        assert rep.value == 0
        assert rep.denominator > 0

    @pytest.mark.parametrize("setting", ["7.1c", "7.3c", "co6c"])
    def test_divergent_growth_samples(self, setting):
        rep = avg_estimator(setting, 100)
        assert rep.value is None
        assert rep.divergent
        assert rep.growth_samples == (
            (30030, 39, 5),
            (510510, 56, 6),
            (223092870, 98, 8),
        )
        ratios = [Fraction(s, w) for _, s, w in rep.growth_samples]
        assert ratios == sorted(ratios) and len(set(ratios)) == len(ratios)

    def test_middle_case_reports_enumerated_value(self):
        # in Z/pZ the count is p for every ell, so the average exceeds
        # the claimed [2, ell] range; the report carries both
        rep = avg_estimator("7.3b", 200, ell=2)
        assert rep.claimed == "[2, ell]"
        assert rep.value > 2
        assert rep.numerator == sum(
            p
            for c in range(2, 201)
            for p in stats.prime_divisors(c, 3)
            if p != 2
        )

    def test_middle_case_rejects_ell_one(self):
        with pytest.raises(ValueError):
            avg_estimator("7.3b", 100, ell=1)

    def test_empty_denominator(self):
        with pytest.raises(errors.EmptyDenominator):
            avg_estimator("7.5b", 4)

    def test_degree_n_mode(self):
        # in F_{p^2} with c = 0 mod p and ell = 1 the count is still p
        rep = avg_estimator("7.1c", 30, degree_n=2)
        assert rep.divergent  # degree-n mode leaves the trend samples alone
        rep_b = avg_estimator("7.1b", 60, ell=2, degree_n=2)
        # z^(p^2) = z exactly on F_{p^2}, so the count is p^2 when p | c
        assert rep_b.numerator == sum(
            p * p
            for c in range(2, 61)
            for p in stats.prime_divisors(c, 3)
            if p != 2
        )
        with pytest.raises(ValueError):
            avg_estimator("7.5b", 50, degree_n=2)

    def test_reports_are_deterministic(self):
        a = avg_estimator("7.5b", 3000)
        b = avg_estimator("7.5b", 3000)
        assert a == b


class TestDensities:
    def test_family_91_at_210(self):
        rep = density_estimator("9.1", 210)
        assert (rep.numerator, rep.denominator) == (3, 45)
        assert rep.ratio == Fraction(3, 45)

    def test_family_93_at_210(self):
        rep = density_estimator("9.3", 210)
        assert (rep.numerator, rep.denominator) == (42, 45)

    def test_family_91_power_of_two(self):
        assert density_estimator("9.1", 128).ratio == 0

    def test_family_91_equals_omega_over_primes(self):
        for c in (30, 210, 2310, 4620):
            rep = density_estimator("9.1", c)
            assert rep.ratio == Fraction(omega(c), prime_count(c) - 1)

    def test_family_91_small_at_primorial(self):
        rep = density_estimator("9.1", 510510)
        assert rep.numerator == 6
        assert rep.denominator == prime_count(510510) - 1
        assert rep.ratio < Fraction(1, 100)

    def test_complementary_families(self):
        for c in (210, 211, 1000):
            n_eq_p = density_estimator("9.1", c)
            n_eq_0 = density_estimator("9.3", c)
            assert n_eq_p.numerator + n_eq_0.numerator == n_eq_p.denominator

    def test_family_10x_partition(self):
        # Y is 2, 1, 0 according to c mod p being 0, generic, or -1
        for c in (100, 720720):
            reps = [density_estimator(f, c) for f in ("10.1", "10.2", "10.3")]
            total = sum(r.numerator for r in reps)
            assert total == reps[0].denominator

    def test_empty_denominator(self):
        with pytest.raises(errors.EmptyDenominator):
            density_estimator("10.1", 4)

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            density_estimator("42", 100)
