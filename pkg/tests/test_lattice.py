"""Lattice invariants, discriminant forms, and bounded searches.

Frozen values below were derived by hand (small diagonalizations, dual
denominators) or by classical facts (E8 root count) before the code ran.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vveis import linalg
from vveis.errors import NotEven, NotSymmetric, PreconditionError, Singular
from vveis.lattice import (
    EvenLattice,
    RepResult,
    coset_represents,
    discriminant_form,
    new_lattice,
    t_max,
    t_mu,
    theta_counts,
    witt_rank_bounded,
)

U = [[0, 1], [1, 0]]
A1 = [[2]]
A1M = [[-2]]

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


class TestLinalg:
    def test_det(self):
        assert linalg.det_int(U) == -1
        assert linalg.det_int(E8) == 1
        assert linalg.det_int(D4) == 4

    def test_smith_invariants(self):
        for g in (U, A1, E8, D4, direct_sum(U, A1M)):
            d, u, v = linalg.smith_normal_form([list(r) for r in g])
            assert abs(linalg.det_int(u)) == 1
            assert abs(linalg.det_int(v)) == 1
            prod = linalg.mat_mul(linalg.mat_mul(u, [list(r) for r in g]), v)
            for i in range(len(g)):
                for j in range(len(g)):
                    assert prod[i][j] == (d[i] if i == j else 0)
            for i in range(len(d) - 1):
                assert d[i + 1] % d[i] == 0

    def test_congruent_diagonalize(self):
        for g in (U, A1M, E8, D4, direct_sum(U, U, A1M)):
            diag, c = linalg.congruent_diagonalize(g)
            gf = [[Fraction(x) for x in row] for row in g]
            res = linalg.mat_mul(linalg.mat_mul(linalg.transpose(c), gf), c)
            for i in range(len(g)):
                for j in range(len(g)):
                    assert res[i][j] == (diag[i] if i == j else 0)

    @given(st.lists(st.lists(st.integers(-4, 4), min_size=3, max_size=3),
                    min_size=3, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_congruence_random(self, raw):
        g = [[raw[i][j] + raw[j][i] for j in range(3)] for i in range(3)]
        diag, c = linalg.congruent_diagonalize(g)
        gf = [[Fraction(x) for x in row] for row in g]
        res = linalg.mat_mul(linalg.mat_mul(linalg.transpose(c), gf), c)
        for i in range(3):
            for j in range(3):
                assert res[i][j] == (diag[i] if i == j else 0)


class TestEvenLattice:
    def test_hyperbolic_plane(self):
        lat = new_lattice(U)
        assert (lat.sig_pos, lat.sig_neg) == (1, 1)
        assert lat.det == -1
        assert lat.level == 1

    def test_a1(self):
        lat = new_lattice(A1)
        assert (lat.sig_pos, lat.sig_neg) == (1, 0)
        assert lat.det == 2
        assert lat.level == 4

    def test_validation(self):
        with pytest.raises(NotEven):
            new_lattice([[1, 0], [0, 1]])
        with pytest.raises(NotSymmetric):
            new_lattice([[2, 1], [0, 2]])
        with pytest.raises(Singular):
            new_lattice([[2, 2], [2, 2]])

    def test_e8(self):
        lat = new_lattice(E8)
        assert lat.det == 1
        assert (lat.sig_pos, lat.sig_neg) == (8, 0)
        assert lat.level == 1

    def test_fixture_12_2(self):
        lat = new_lattice(direct_sum(E8, D4, A1M, A1M))
        assert (lat.sig_pos, lat.sig_neg) == (12, 2)
        assert lat.det == 16
        assert lat.level == 4

    def test_level_minimality(self):
        # N*Q integral on the dual; N/p fails for each prime p | N
        for g in (A1, D4, direct_sum(A1, [[6]]), direct_sum(U, A1M)):
            lat = new_lattice(g)
            disc = discriminant_form(lat)
            for mu in disc.elements():
                assert (lat.level * disc.q_value(mu)).denominator == 1
            for p in (2, 3, 5, 7):
                if lat.level % p == 0:
                    assert any(
                        (lat.level // p * disc.q_value(mu)).denominator != 1
                        for mu in disc.elements())

    def test_det_level_same_primes(self):
        for g in (A1, D4, E8, direct_sum(A1, [[6]])):
            lat = new_lattice(g)
            d, n = abs(lat.det), lat.level
            for p in (2, 3, 5, 7, 11):
                assert (d % p == 0) == (n % p == 0) or d == 1


class TestDiscriminantForm:
    def test_unimodular_trivial(self):
        for g in (U, E8):
            disc = discriminant_form(new_lattice(g))
            assert disc.size == 1
            assert disc.elements() == [()]
            assert disc.q_value(()) == 0

    def test_a1_minus(self):
        disc = discriminant_form(new_lattice(A1M))
        assert disc.orders == (2,)
        assert disc.q_value((1,)) == Fraction(3, 4)
        assert disc.q_value((0,)) == 0
        assert disc.order_of((1,)) == 2

    def test_d4(self):
        disc = discriminant_form(new_lattice(D4))
        assert disc.size == 4
        assert sorted(disc.orders) in ([2, 2], [4])
        # group must be (Z/2)^2: D4 discriminant form is 2-torsion
        assert all(disc.order_of(mu) in (1, 2) for mu in disc.elements())

    def test_cocycle(self):
        # Q(mu+nu) - Q(mu) - Q(nu) = (mu,nu) mod 1
        disc = discriminant_form(new_lattice(direct_sum(A1M, [[4]])))
        els = disc.elements()
        for mu in els:
            for nu in els:
                s = tuple((a + b) % d for a, b, d in zip(mu, nu, disc.orders))
                lhs = disc.q_value(s) - disc.q_value(mu) - disc.q_value(nu)
                assert (lhs - disc.bilinear(mu, nu)).denominator == 1

    def test_size_matches_det(self):
        for g in (D4, A1, direct_sum(A1, A1M), direct_sum(U, [[6]])):
            lat = new_lattice(g)
            assert discriminant_form(lat).size == abs(lat.det)

    def test_negated_shares_encoding(self):
        disc = discriminant_form(new_lattice(direct_sum(A1M, [[4]])))
        neg = disc.negated()
        assert neg.orders == disc.orders
        for mu in disc.elements():
            total = disc.q_value(mu) + neg.q_value(mu)
            assert total.denominator == 1


class TestThetaCounts:
    def test_a1(self):
        counts = theta_counts(new_lattice(A1), 9)
        assert counts == {1: 2, 4: 2, 9: 2}

    def test_e8_roots(self):
        counts = theta_counts(new_lattice(E8), 2)
        assert counts[1] == 240
        assert counts[2] == 2160

    def test_d4(self):
        counts = theta_counts(new_lattice(D4), 2)
        assert counts[1] == 24
        assert counts[2] == 24


class TestCosetRepresents:
    def test_precondition(self):
        with pytest.raises(PreconditionError):
            coset_represents(new_lattice(U), Fraction(1, 2), ())

    def test_e8_roots_found(self):
        # Q = 1 is hit by any simple root, well inside radius 3
        assert coset_represents(new_lattice(E8), 1, (), radius=3) \
            is RepResult.REPRESENTED

    def test_definite_not_within_radius(self):
        # x^2 + y^2 = 3 has no solutions at any radius
        lat = new_lattice(direct_sum(A1, A1))
        zero = disc_zero(lat)
        assert coset_represents(lat, 3, zero) is RepResult.NOT_WITHIN_RADIUS
        assert coset_represents(lat, 2, zero) is RepResult.REPRESENTED

    def test_definite_wrong_sign(self):
        lat = new_lattice(A1)
        assert coset_represents(lat, -1, disc_zero(lat)) \
            is RepResult.NOT_REPRESENTED

    def test_rank3_box(self):
        lat = new_lattice(direct_sum(U, A1M))
        assert coset_represents(lat, 1, disc_zero(lat)) is RepResult.REPRESENTED

    def test_m_zero_definite(self):
        lat = new_lattice(direct_sum(A1, A1))
        assert coset_represents(lat, 0, disc_zero(lat)) is RepResult.REPRESENTED


def disc_zero(lat):
    return discriminant_form(lat).zero()


class TestTmu:
    def test_u_a1minus(self):
        # -Q(x,y,z) = z^2 - xy on U + <-2>; minimum 1 on the zero coset
        lat = new_lattice(direct_sum(U, A1M))
        disc = discriminant_form(lat)
        assert t_mu(lat, disc.zero()) == 1
        nonzero = [mu for mu in disc.elements() if mu != disc.zero()]
        assert len(nonzero) == 1
        assert t_mu(lat, nonzero[0]) == Fraction(1, 4)
        assert t_max(lat) == 1

    def test_sig_precondition(self):
        with pytest.raises(PreconditionError):
            t_mu(new_lattice(E8), ())

    def test_brute_force_agreement(self):
        # oracle: direct minimum of -Q over coset vectors of sup-norm <= 10
        lat = new_lattice(direct_sum(U, A1M))
        disc = discriminant_form(lat)
        for mu in disc.elements():
            vec = disc.vector(mu)
            best = None
            for x in range(-10, 11):
                for y in range(-10, 11):
                    for z in range(-10, 11):
                        lam = (x + vec[0], y + vec[1], z + vec[2])
                        val = -lat.q_value(lam)
                        if val > 0 and (best is None or val < best):
                            best = val
            assert t_mu(lat, mu) == best


class TestWittRank:
    def test_definite(self):
        rep = witt_rank_bounded(new_lattice(E8), 2)
        assert (rep.lower_bound, rep.exact) == (0, True)

    def test_u_plus_u(self):
        rep = witt_rank_bounded(new_lattice(direct_sum(U, U)), 2)
        assert (rep.lower_bound, rep.exact) == (2, True)

    def test_u(self):
        rep = witt_rank_bounded(new_lattice(U), 2)
        assert (rep.lower_bound, rep.exact) == (1, True)

    def test_anisotropic_inconclusive(self):
        # x^2 + y^2 = 3(z^2 + w^2) forces x,y,z,w = 0 by 3-adic descent
        lat = new_lattice(direct_sum(A1, A1, [[-6]], [[-6]]))
        rep = witt_rank_bounded(lat, 2)
        assert rep.lower_bound == 0
        assert not rep.exact
