"""Functional-graph census, dichotomy probe, and Newton lifting."""

import random

import pytest

from fixedpoint_lab import counters as ct
from fixedpoint_lab import dynamics as dy
from fixedpoint_lab import errors
from fixedpoint_lab.counters import Explicit, ExtField, PMinusOnePow, PPow, PrimeField
from fixedpoint_lab.dynamics import (
    PadicRing,
    adam_fares_probe,
    functional_graph_census,
    hensel_lift,
)


class TestCensus:
    def test_three_cycle_with_tails(self):
        # z -> z^2 + 1 mod 5: 0 -> 1 -> 2 -> 0 cycle; 3 and 4 feed in
        census = functional_graph_census(PrimeField(5), Explicit(2), 1)
        assert census.cycle_lengths == (3,)
        assert census.fixed_count == 0
        assert census.tail_count == 2

    def test_identity_map(self):
        census = functional_graph_census(PrimeField(3), PPow(1), 0)
        assert census.cycle_lengths == (1, 1, 1)
        assert census.fixed_count == 3
        assert census.tail_count == 0

    def test_single_fixed_point(self):
        census = functional_graph_census(PrimeField(5), PMinusOnePow(1), 1)
        assert census.cycle_lengths == (1,)
        assert census.fixed_count == 1
        assert census.tail_count == 4

    def test_too_large(self):
        with pytest.raises(errors.TooLarge):
            functional_graph_census(PadicRing(3, 10), PPow(1), 0, cap=100)

    @pytest.mark.parametrize(
        "ring,dspec,c",
        [
            (PrimeField(7), Explicit(3), 2),
            (PrimeField(13), PPow(2), 5),
            (ExtField(3, 2), PPow(1), (0, 1)),
            (ExtField(5, 2), PMinusOnePow(2), 3),
            (PadicRing(3, 4), PPow(1), 6),
            (PadicRing(5, 3), Explicit(7), 11),
        ],
    )
    def test_conservation(self, ring, dspec, c):
        census = functional_graph_census(ring, dspec, c)
        assert sum(census.cycle_lengths) + census.tail_count == census.ring_size
        assert census.fixed_count == census.cycle_lengths.count(1)

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_fixed_count_matches_counters(self, p):
        for ell in (1, 2):
            for c in range(p):
                census = functional_graph_census(PrimeField(p), PPow(ell), c)
                direct = ct.count_X(p, ell, c).count
                assert census.fixed_count == direct

    @pytest.mark.parametrize("p,ell", [(3, 1), (3, 2), (5, 1), (7, 3)])
    def test_identity_census_when_p_divides_c(self, p, ell):
        census = functional_graph_census(PrimeField(p), PPow(ell), 0)
        assert census.cycle_lengths == (1,) * p

    def test_padic_census_vs_direct_iteration(self):
        # independent oracle: build the map with materialized d
        p, k, ell, c = 3, 3, 2, 4
        n = p**k
        d = p**ell
        images = [(pow(z, d, n) + c) % n for z in range(n)]
        census = functional_graph_census(PadicRing(p, k), PPow(ell), c)
        expected = dy._census_of_map(images)
        assert census == expected


class TestProbe:
    def test_three_fixed_points_mod_9(self):
        rep = adam_fares_probe(3, 1, 3, 2)
        assert rep.fixed_count == 3
        assert rep.fixed_points == (2, 3, 4)
        assert rep.has_p_fixed_points
        assert rep.dichotomy_holds

    def test_zero_case(self):
        assert adam_fares_probe(3, 1, 1, 1).fixed_count == 0

    def test_identity_mod_3(self):
        assert adam_fares_probe(3, 1, 0, 1).fixed_count == 3

    def test_probe_matches_materialized_map(self):
        p, ell, k = 5, 2, 3
        n = p**k
        d = p**ell
        for c in (0, 5, 7):
            rep = adam_fares_probe(p, ell, c, k)
            expected = tuple(z for z in range(n) if (pow(z, d, n) + c) % n == z)
            assert rep.fixed_points == expected

    def test_large_tower_exponent(self):
        # p^ell astronomically large; probe must still run
        rep = adam_fares_probe(3, 10**6, 3, 2)
        assert rep.census.ring_size == 9


class TestHensel:
    def test_lift_example(self):
        approx = hensel_lift(3, PPow(1), 3, 0, 2)
        assert (approx.p, approx.k, approx.value) == (3, 2, 3)
        assert (3**3 - 3 + 3) % 9 == 0

    def test_k1_returns_root(self):
        assert hensel_lift(3, PPow(1), 3, 0, 1).value == 0

    def test_singular_root(self):
        # f(4) = 255 = 0 mod 5 and f'(4) = 255 = 0 mod 5
        with pytest.raises(errors.SingularRoot):
            hensel_lift(5, Explicit(4), 3, 4, 2)

    def test_not_a_root(self):
        with pytest.raises(errors.NotARoot):
            hensel_lift(5, Explicit(4), 3, 1, 2)

    def test_precision_cap(self):
        with pytest.raises(errors.PrecisionTooLarge):
            hensel_lift(7, PPow(1), 7, 0, 40)
        hensel_lift(7, PPow(1), 7, 0, 40, allow_wide=True)

    @pytest.mark.parametrize("p", [3, 5, 7])
    @pytest.mark.parametrize("ell", [1, 2])
    def test_lift_residual_and_consistency(self, p, ell):
        d = p**ell
        c = 2 * p  # c = 0 mod p, so every residue is a root mod p
        for root in range(p):
            for k in (5, 10):
                approx = hensel_lift(p, PPow(ell), c, root, k)
                modulus = p**k
                # independent residual check with the materialized degree
                assert (pow(approx.value, d, modulus) - approx.value + c) % modulus == 0
                assert approx.value % p == root
                prev = hensel_lift(p, PPow(ell), c, root, k - 1)
                assert approx.value % p ** (k - 1) == prev.value

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_derivative_criterion_for_tower_family(self, p):
        # with d = p^ell the derivative is -1 mod p at every point
        for ell in (1, 2, 3):
            d = p**ell
            for z in range(p):
                assert (d * pow(z, d - 1, p) - 1) % p == p - 1

    def test_explicit_family_lift(self):
        # z^2 - z + 5 = z(z - 1) mod 5: simple roots 0 and 1
        for root in (0, 1):
            approx = hensel_lift(5, Explicit(2), 5, root, 6)
            modulus = 5**6
            assert (pow(approx.value, 2, modulus) - approx.value + 5) % modulus == 0

    def test_huge_tower_lift(self):
        # exponent p^ell far beyond anything materializable
        approx = hensel_lift(3, PPow(50), 6, 1, 8)
        # verify via the unit reduction: for x a unit, x^d = x^(d mod lam)
        modulus = 3**8
        lam = 3**7 * 2
        r = pow(3, 50, lam)
        x = approx.value
        assert x % 3 == 1
        assert (pow(x, r, modulus) - x + 6) % modulus == 0
