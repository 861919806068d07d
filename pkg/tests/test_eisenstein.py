"""Eisenstein coefficients against theta-series oracles.

Every frozen count below comes from one of two independent sources, both
computed before the assembly code was trusted: classical divisor-sum
identities (E8: 240 sigma_3) or direct enumeration of dual-coset vectors
with a Cholesky-bounded recursive search.  Single-class genera only, so
theta equals the Eisenstein series exactly and the comparison is integer
against Fraction.
"""

from fractions import Fraction

import pytest

from vveis import eisenstein
from vveis.eisenstein import (
    context,
    eis_coefficient,
    eis_expansion,
    lower_bound_report,
)
from vveis.errors import (
    KappaTooSmall,
    NotAdmissible,
    ParityMismatch,
    PreconditionError,
)
from vveis.lattice import discriminant_form, new_lattice

E8 = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
]

D4 = [
    [2, -1, 0, 0],
    [-1, 2, -1, -1],
    [0, -1, 2, 0],
    [0, -1, 0, 2],
]

D5 = [
    [2, -1, 0, 0, 0],
    [-1, 2, -1, 0, 0],
    [0, -1, 2, -1, -1],
    [0, 0, -1, 2, 0],
    [0, 0, -1, 0, 2],
]

D6 = [
    [2, -1, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0],
    [0, -1, 2, -1, 0, 0],
    [0, 0, -1, 2, -1, -1],
    [0, 0, 0, -1, 2, 0],
    [0, 0, 0, -1, 0, 2],
]

E7 = [
    [2, -1, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 2],
]


def diag(entries):
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def direct_sum(*grams):
    n = sum(len(g) for g in grams)
    out = [[0] * n for _ in range(n)]
    off = 0
    for g in grams:
        for i, row in enumerate(g):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(g)
    return out


FIXTURE = direct_sum(E8, D4, [[-2]], [[-2]])


def sigma3(m):
    return sum(d ** 3 for d in range(1, m + 1) if m % d == 0)


class TestEvenRank:
    def test_e8_divisor_sum(self):
        lat = new_lattice(E8)
        ctx = context(lat)
        for m in range(1, 9):
            assert eis_coefficient(lat, m, (), ctx=ctx) == 240 * sigma3(m)

    def test_d6_all_cosets(self):
        # dual-coset enumeration, kappa = 3
        frozen = {
            (0, 0): [(1, 60), (2, 252), (3, 544)],
            (0, 1): [(Fraction(3, 4), 32), (Fraction(7, 4), 192),
                     (Fraction(11, 4), 480)],
            (1, 0): [(Fraction(1, 2), 12), (Fraction(3, 2), 160),
                     (Fraction(5, 2), 312)],
            (1, 1): [(Fraction(3, 4), 32), (Fraction(7, 4), 192),
                     (Fraction(11, 4), 480)],
        }
        lat = new_lattice(D6)
        ctx = context(lat)
        for mu, rows in frozen.items():
            for m, r in rows:
                assert eis_coefficient(lat, m, mu, ctx=ctx) == r

    def test_sum_of_four_squares_boundary(self):
        # kappa = 2: the boundary weight still matches the classical counts
        lat = new_lattice(diag([2, 2, 2, 2]))
        ctx = context(lat)
        assert ctx.hecke_boundary
        for m, r in enumerate([8, 24, 32, 24, 48, 96], start=1):
            assert eis_coefficient(lat, m, ctx.disc.zero(), ctx=ctx) == r
        mu = next(x for x in ctx.disc.elements() if x != ctx.disc.zero())
        q0 = ctx.disc.q_value(mu)
        for k, r in enumerate([2, 12, 26, 28]):
            assert eis_coefficient(lat, q0 + k, mu, ctx=ctx) == r

    def test_signature_12_2_sign_and_rationality(self):
        lat = new_lattice(FIXTURE)
        ctx = context(lat)
        assert ctx.kappa == 7
        cosets = ctx.disc.elements()[:3]
        for mu in cosets:
            base = ctx.disc.q_value(mu)
            m = base if base else Fraction(1)
            for _ in range(2):
                e = eis_coefficient(lat, m, mu, ctx=ctx)
                assert isinstance(e, Fraction)
                # b- = 2 flips the positivity direction
                assert e < 0
                m += 1


class TestOddRank:
    def test_d5_all_cosets(self):
        frozen = {
            (0,): [(1, 40), (2, 90), (3, 240), (4, 200), (5, 560),
                   (6, 400), (7, 800), (8, 730), (9, 1240), (10, 752)],
            (1,): [(Fraction(5, 8), 16), (Fraction(13, 8), 80),
                   (Fraction(21, 8), 160), (Fraction(29, 8), 240)],
            (2,): [(Fraction(1, 2), 10), (Fraction(3, 2), 80),
                   (Fraction(5, 2), 112), (Fraction(7, 2), 320)],
            (3,): [(Fraction(5, 8), 16), (Fraction(13, 8), 80),
                   (Fraction(21, 8), 160), (Fraction(29, 8), 240)],
        }
        lat = new_lattice(D5)
        ctx = context(lat)
        for mu, rows in frozen.items():
            for m, r in rows:
                assert eis_coefficient(lat, m, mu, ctx=ctx) == r

    def test_e7_both_cosets(self):
        frozen = {
            (0,): [(1, 126), (2, 756), (3, 2072)],
            (1,): [(Fraction(3, 4), 56), (Fraction(7, 4), 576),
                   (Fraction(11, 4), 1512)],
        }
        lat = new_lattice(E7)
        ctx = context(lat)
        for mu, rows in frozen.items():
            for m, r in rows:
                assert eis_coefficient(lat, m, mu, ctx=ctx) == r

    def test_five_squares(self):
        lat = new_lattice(diag([2, 2, 2, 2, 2]))
        ctx = context(lat)
        for m, r in enumerate([10, 40, 80, 90, 112, 240, 320, 200], start=1):
            assert eis_coefficient(lat, m, ctx.disc.zero(), ctx=ctx) == r

    def test_extended_space_discriminant_sign(self):
        # the character lives on the discriminant of the space extended
        # by <-m>; the opposite sign choice would give 48.82... here
        lat = new_lattice(D5)
        assert eis_coefficient(lat, 1, (0,)) == 40

    def test_interval_fallback_agrees(self, monkeypatch):
        def raise_parity(s, chi):
            raise ParityMismatch("forced")

        monkeypatch.setattr(eisenstein, "l_value_exact", raise_parity)
        lat = new_lattice(D5)
        assert eis_coefficient(lat, 1, (0,)) == 40
        assert eis_coefficient(lat, Fraction(5, 8), (1,)) == 16

    def test_moebius_term_with_odd_square_part(self):
        # m = 9 has f = 3 coprime to 2N: the divisor-sum correction is live
        lat = new_lattice(D5)
        assert eis_coefficient(lat, 9, (0,)) == 1240


class TestGeneralBehavior:
    def test_constant_term(self):
        lat = new_lattice(D5)
        disc = discriminant_form(lat)
        assert eis_coefficient(lat, 0, disc.zero()) == 1
        # m = 0 on a coset with q = 0 would be the only other legal case;
        # D5 has none, so the congruence guard fires instead
        with pytest.raises(PreconditionError):
            eis_coefficient(lat, 0, (1,))

    def test_congruence_guard(self):
        lat = new_lattice(D5)
        with pytest.raises(PreconditionError):
            eis_coefficient(lat, Fraction(1, 2), (1,))
        with pytest.raises(PreconditionError):
            eis_coefficient(lat, -1, (0,))

    def test_mu_negation_symmetry(self):
        for gram in (D5, D6):
            lat = new_lattice(gram)
            ctx = context(lat)
            for mu in ctx.disc.elements():
                neg = ctx.disc.neg(mu)
                m = ctx.disc.q_value(mu) + 1
                assert (eis_coefficient(lat, m, mu, ctx=ctx)
                        == eis_coefficient(lat, m, neg, ctx=ctx))

    def test_kappa_too_small(self):
        with pytest.raises(KappaTooSmall):
            context(new_lattice(diag([2, 2, 2])))

    def test_odd_negative_signature_rejected(self):
        with pytest.raises(PreconditionError):
            context(new_lattice(diag([2, 2, 2, 2, -2])))

    def test_expansion_matches_pointwise(self):
        lat = new_lattice(E8)
        series = eis_expansion(lat, 4)
        assert series.den == lat.level == 1
        assert series.sign == 1
        assert not series.hecke_flag
        assert series.coefficient(0, ()) == 1
        for m in range(1, 4):
            assert series.coefficient(m, ()) == 240 * sigma3(m)

    def test_expansion_hecke_flag(self):
        lat = new_lattice(diag([2, 2, 2, 2]))
        series = eis_expansion(lat, 1)
        assert series.hecke_flag

    def test_expansion_coset_exponents(self):
        lat = new_lattice(D5)
        series = eis_expansion(lat, 2)
        assert series.den == 8
        assert series.coefficient(Fraction(5, 8), (1,)) == 16
        assert series.coefficient(Fraction(13, 8), (3,)) == 80
        assert series.coefficient(Fraction(1, 2), (2,)) == 10


class TestLowerBoundReport:
    def test_e8_ratios(self):
        lat = new_lattice(E8)
        pairs = [(m, ()) for m in range(1, 9)]
        report = lower_bound_report(lat, pairs, bound_a=4)
        assert report.exponent == 3
        assert report.all_positive
        assert report.rows[0].ratio_exact == 240
        # prefix minima never increase
        for a, b in zip(report.running_min, report.running_min[1:]):
            assert b <= a

    def test_valuation_budget(self):
        lat = new_lattice(E8)
        with pytest.raises(NotAdmissible):
            lower_bound_report(lat, [(8, ())], bound_a=2)

    def test_unrepresented_coset(self):
        # doubling E8 makes every value even, so m = 1 cannot occur
        doubled = [[2 * x for x in row] for row in E8]
        lat = new_lattice(doubled)
        zero = discriminant_form(lat).zero()
        with pytest.raises(NotAdmissible):
            lower_bound_report(lat, [(1, zero)], bound_a=4)

    def test_boundary_uses_shaved_exponent(self):
        lat = new_lattice(diag([2, 2, 2, 2]))
        report = lower_bound_report(lat, [(m, (0, 0, 0, 0)) for m in (1, 2, 3)],
                                    bound_a=4, eps=Fraction(1, 10))
        assert report.exponent == Fraction(9, 10)
        assert report.rows[0].ratio_exact is None
        assert report.all_positive

    def test_half_integral_kappa_ratio(self):
        lat = new_lattice(D5)
        report = lower_bound_report(lat, [(1, (0,)), (2, (0,))], bound_a=4)
        assert report.exponent == Fraction(3, 2)
        assert report.rows[0].ratio_exact is None
        assert report.all_positive
