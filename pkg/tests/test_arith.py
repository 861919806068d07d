"""Characters, Bernoulli numbers, L-values, intervals, reconstruction.

Expected values were frozen from hand derivations (finite sums, functional
equation instances) before implementation.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vveis.arith import (
    CHI_TRIVIAL,
    Interval,
    QuadraticCharacter,
    SymbolicReal,
    bernoulli,
    bernoulli_gen,
    gamma_half,
    iroot,
    kronecker,
    l_value_exact,
    l_value_interval,
    moebius,
    pi_interval,
    pow_interval,
    rational_reconstruct,
    sigma,
    sqrt_interval,
    zeta_exact,
    zeta_interval,
)
from vveis.errors import AmbiguousInterval, ParityMismatch, PreconditionError


class TestKronecker:
    def test_trivial_top(self):
        assert all(kronecker(1, a) == 1 for a in range(1, 30))

    def test_minus4_mod3(self):
        assert kronecker(-4, 3) == -1

    def test_two_adic_convention(self):
        # (D|2) = 1 for D = 1 mod 8, -1 for D = 5 mod 8, 0 for even D
        assert kronecker(17, 2) == 1
        assert kronecker(-7, 2) == 1
        assert kronecker(5, 2) == -1
        assert kronecker(12, 2) == 0
        # cross-check by multiplicativity: (17|4) = (17|2)^2
        assert kronecker(17, 4) == kronecker(17, 2) ** 2

    def test_legendre_euler_criterion(self):
        for p in (3, 5, 7, 11, 13):
            for a in range(1, p):
                euler = pow(a, (p - 1) // 2, p)
                expect = 1 if euler == 1 else -1
                assert kronecker(a, p) == expect

    @given(st.integers(-50, 50).filter(lambda x: x != 0),
           st.integers(1, 50), st.integers(1, 50))
    @settings(max_examples=200, deadline=None)
    def test_bottom_multiplicative(self, d, a, b):
        assert kronecker(d, a * b) == kronecker(d, a) * kronecker(d, b)

    @given(st.integers(-30, 30).filter(lambda x: x != 0),
           st.integers(-30, 30).filter(lambda x: x != 0),
           st.integers(1, 60))
    @settings(max_examples=200, deadline=None)
    def test_top_multiplicative(self, a, b, n):
        assert kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n)


class TestCharacter:
    def test_fundamental_parts(self):
        assert QuadraticCharacter(-4).d0 == -4
        assert QuadraticCharacter(12).d0 == 12
        assert QuadraticCharacter(48).d0 == 12
        assert QuadraticCharacter(8).d0 == 8
        assert QuadraticCharacter(-8).d0 == -8
        assert QuadraticCharacter(9).d0 == 1
        assert QuadraticCharacter(2).d0 == 8  # chi_2 = chi_8 on odd arguments

    def test_parity(self):
        assert QuadraticCharacter(-4).parity == -1
        assert QuadraticCharacter(5).parity == 1

    def test_rejects_3_mod_4(self):
        with pytest.raises(PreconditionError):
            QuadraticCharacter(3)

    def test_zero_set(self):
        chi = QuadraticCharacter(12)
        for a in range(1, 40):
            from math import gcd
            assert (chi(a) == 0) == (gcd(a, 12) > 1)


class TestDivisorSums:
    def test_frozen(self):
        assert sigma(3, 1) == 1
        assert sigma(3, 2) == 9
        assert sigma(-3, 4, QuadraticCharacter(-4)) == 1

    def test_multiplicative(self):
        chi = QuadraticCharacter(-4)
        for a, b in ((3, 4), (5, 8), (9, 2), (25, 8)):
            assert sigma(-2, a * b, chi) == sigma(-2, a, chi) * sigma(-2, b, chi)

    def test_moebius(self):
        assert moebius(12) == 0
        assert moebius(6) == 1
        assert moebius(30) == -1
        assert moebius(1) == 1


class TestBernoulli:
    def test_classical(self):
        assert bernoulli(0) == 1
        assert bernoulli(1) == Fraction(-1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(4) == Fraction(-1, 30)
        assert bernoulli(12) == Fraction(-691, 2730)

    def test_generalized_frozen(self):
        assert bernoulli_gen(2, CHI_TRIVIAL) == Fraction(1, 6)
        assert bernoulli_gen(1, QuadraticCharacter(-4)) == Fraction(-1, 2)

    def test_parity_vanishing(self):
        for d in (-4, 5, 8, -8, 12, -3 * 4, 13, -20, 21, 24):
            chi = QuadraticCharacter(d).primitive_part()
            for n in range(1, 9):
                if chi.parity != (-1) ** n and not (chi.conductor == 1 and n == 1):
                    assert bernoulli_gen(n, chi) == 0


class TestLValues:
    def test_zeta2(self):
        assert zeta_exact(2) == SymbolicReal.make(Fraction(1, 6), 2, 1)

    def test_zeta4(self):
        assert zeta_exact(4) == SymbolicReal.make(Fraction(1, 90), 4, 1)

    def test_l1_chi_minus4(self):
        v = l_value_exact(1, QuadraticCharacter(-4))
        assert v == SymbolicReal.make(Fraction(1, 4), 1, 1)

    def test_parity_mismatch(self):
        with pytest.raises(ParityMismatch):
            l_value_exact(2, QuadraticCharacter(-4))
        with pytest.raises(ParityMismatch):
            l_value_exact(1, QuadraticCharacter(5))

    def test_interval_zeta2(self):
        iv = zeta_interval(2, 64)
        assert iv.width <= Fraction(1, 1 << 64)
        assert iv.intersects(zeta_exact(2).interval(160))

    def test_interval_catalan(self):
        # L(2, chi_-4) = Catalan's constant
        iv = l_value_interval(2, QuadraticCharacter(-4), 64)
        catalan = Fraction(915965594177219015054603514932384110774)
        catalan /= 10 ** 39
        assert iv.lo <= catalan <= iv.hi

    def test_interval_nesting(self):
        a = l_value_interval(2, QuadraticCharacter(8), 64)
        b = l_value_interval(2, QuadraticCharacter(8), 128)
        assert a.lo <= b.lo and b.hi <= a.hi

    def test_exact_vs_interval_battery(self):
        pairs = 0
        for d in (-4, 5, 8, -8, 12, 13, -20, 24, -24, 40):
            chi = QuadraticCharacter(d)
            for s in range(2, 9):
                if chi.primitive_part().parity != (-1) ** s:
                    continue
                exact = l_value_exact(s, chi)
                iv = l_value_interval(s, chi, 96)
                assert iv.intersects(exact.interval(192)), (d, s)
                pairs += 1
        assert pairs >= 30

    def test_imprimitive_reduction(self):
        # chi_48 is chi_12 with the Euler factor at 2 already dead (2 | 12)
        a = l_value_exact(2, QuadraticCharacter(48))
        b = l_value_exact(2, QuadraticCharacter(12))
        assert a == b


class TestSymbolicReal:
    def test_normalization(self):
        x = SymbolicReal.make(1, 0, 12)
        assert (x.q, x.d) == (Fraction(2), 3)

    def test_mul_div(self):
        a = SymbolicReal.make(Fraction(3, 2), 1, 2)
        b = SymbolicReal.make(Fraction(1, 3), -1, 2)
        assert (a * b) == SymbolicReal.make(1, 0, 1)
        assert (a / a).rational_value() == 1

    def test_add_mismatch(self):
        with pytest.raises(PreconditionError):
            SymbolicReal.make(1, 1, 1) + SymbolicReal.make(1, 0, 1)

    def test_gamma(self):
        assert gamma_half(Fraction(5)) == SymbolicReal.make(24)
        assert gamma_half(Fraction(1, 2)) == SymbolicReal.make(1, Fraction(1, 2), 1)
        assert gamma_half(Fraction(7, 2)) == SymbolicReal.make(
            Fraction(15, 8), Fraction(1, 2), 1)
        assert gamma_half(Fraction(-1, 2)) == SymbolicReal.make(
            -2, Fraction(1, 2), 1)

    def test_half_pi_interval(self):
        x = SymbolicReal.make(1, Fraction(1, 2), 1)
        iv = x.interval(96)
        # sqrt(pi) = 1.77245385090551602...
        assert iv.lo < Fraction(177245386, 10 ** 8) < iv.hi + 1


class TestIntervals:
    def test_pi(self):
        iv = pi_interval(96)
        lo_ref = Fraction(31415926535897932384, 10 ** 19)  # < pi
        hi_ref = Fraction(31415926535897932385, 10 ** 19)  # > pi
        assert lo_ref < iv.lo < iv.hi < hi_ref
        assert iv.width <= Fraction(1, 1 << 90)

    def test_iroot(self):
        assert iroot(26, 3) == 2
        assert iroot(27, 3) == 3
        assert iroot(10 ** 12, 4) == 1000
        assert iroot(0, 5) == 0

    def test_pow_interval(self):
        iv = pow_interval(Fraction(2), Fraction(-3, 2), 96)
        # 2^(-3/2) = 0.35355339...
        assert iv.lo < Fraction(35355340, 10 ** 8) < iv.hi + Fraction(1, 10 ** 7)
        assert iv.width < Fraction(1, 1 << 80)

    def test_sqrt_interval(self):
        iv = sqrt_interval(Fraction(2), 96)
        assert iv.lo ** 2 <= 2 <= iv.hi ** 2


class TestReconstruction:
    def test_third(self):
        iv = Interval(Fraction(3333330, 10 ** 7), Fraction(3333337, 10 ** 7))
        assert rational_reconstruct(iv, 10) == Fraction(1, 3)

    def test_integer(self):
        tiny = Fraction(1, 10 ** 30)
        iv = Interval(240 - tiny, 240 + tiny)
        assert rational_reconstruct(iv, 10 ** 6) == 240

    def test_pi_rejected(self):
        pi = pi_interval(128)
        assert rational_reconstruct(pi, 10) is None

    def test_ambiguous(self):
        with pytest.raises(AmbiguousInterval):
            rational_reconstruct(Interval(Fraction(0), Fraction(1)), 10)

    @given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 1000))
    @settings(max_examples=100, deadline=None)
    def test_round_trip(self, num, den):
        x = Fraction(num, den)
        eps = Fraction(1, 4 * 1000 * 1000 * 3)
        assert rational_reconstruct(Interval(x - eps, x + eps), 1000) == x
