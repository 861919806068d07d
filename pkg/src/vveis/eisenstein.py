"""Exact Fourier coefficients of the weight-(rank/2) Eisenstein series.

Even rank: fully exact assembly in SymbolicReal arithmetic (the pi powers and
radicals cancel by construction and the result must collapse to a rational).
Odd rank: the character attached to the extended quadratic space always has
the parity of the central point s = kappa - 1/2 (the negative signature is
even, so the Gram determinant is positive), hence the L-value is exact there
too.  A certified interval route with rational reconstruction and doubled
precision re-verification is kept as a fallback.  Every returned coefficient
is an exact Fraction either way.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import repnums
from .arith import (
    QuadraticCharacter,
    SymbolicReal,
    divisors,
    factorize,
    gamma_half,
    l_value_exact,
    l_value_interval,
    moebius,
    pow_interval,
    rational_reconstruct,
    sigma,
    zeta_exact,
)
from .errors import (
    AmbiguousInterval,
    KappaTooSmall,
    NonRationalResidue,
    NotAdmissible,
    ParityMismatch,
    PositivityViolation,
    PreconditionError,
)
from .lattice import RepResult, coset_represents, discriminant_form
from .qseries import VVQSeries


@dataclass(frozen=True)
class EisensteinContext:
    lattice: object
    disc: object
    kappa: Fraction
    b_minus: int
    primes: tuple  # primes dividing 2N
    hecke_boundary: bool  # kappa == 2: constant term needs the Hecke trick


def context(lattice, disc=None):
    if disc is None:
        disc = discriminant_form(lattice)
    kappa = Fraction(lattice.rank, 2)
    if kappa < 2:
        raise KappaTooSmall(f"kappa = {kappa} < 2")
    if lattice.sig_neg % 2:
        raise PreconditionError(
            "negative signature must be even for a nonzero series of this weight")
    primes = tuple(sorted(factorize(2 * lattice.level)))
    return EisensteinContext(lattice, disc, kappa, lattice.sig_neg, primes,
                             kappa == 2)


def _sym_sqrt(x):
    """sqrt of a positive rational as a SymbolicReal."""
    x = Fraction(x)
    return SymbolicReal.make(Fraction(1, x.denominator), 0,
                             x.numerator * x.denominator)


def _local_product(ctx, m, mu, extra_odd=False):
    """prod over p | 2N of N_{m,mu}(p^{w_p}) / p^{(2k-1)w_p}, exact."""
    two_kappa = int(2 * ctx.kappa)
    dmu = ctx.disc.order_of(mu)
    out = Fraction(1)
    for p in ctx.primes:
        wp = repnums.w_p(m, dmu, p)
        n_p = repnums.count(ctx.lattice, m, mu, p ** wp, disc=ctx.disc).count
        out *= Fraction(n_p, p ** ((two_kappa - 1) * wp))
        if extra_odd:
            out /= 1 - Fraction(p) ** (1 - two_kappa)
    return out


def _eis_even(ctx, m, mu):
    kappa = int(ctx.kappa)
    dmu = ctx.disc.order_of(mu)
    disc_size = abs(ctx.lattice.det)
    d_val = (-1) ** kappa * ctx.lattice.det
    chi = QuadraticCharacter(4 * d_val)
    n = m * dmu * dmu
    assert n.denominator == 1, "d_mu^2 m is an integer"
    div_sum = sigma(1 - kappa, int(n), chi)
    arch = SymbolicReal.make(
        Fraction(2) ** kappa * m ** (kappa - 1) * (-1) ** (ctx.b_minus // 2),
        kappa, 1)
    arch = arch / gamma_half(kappa) / _sym_sqrt(disc_size)
    lval = l_value_exact(kappa, chi)
    total = arch * div_sum * _local_product(ctx, m, mu) / lval
    if not total.is_rational:
        raise NonRationalResidue(f"even-rank assembly left {total}")
    return total.rational_value()


def _split_square(ctx, n):
    """n = m0 f^2 with (f, 2N) = 1 and m0 squarefree away from 2N."""
    f = 1
    for p, e in factorize(n).items():
        if p not in ctx.primes:
            f *= p ** (e // 2)
    return n // (f * f), f


def _eis_odd(ctx, m, mu, prec_bits, den_bound=1 << 64):
    kappa = ctx.kappa  # half-integer
    j = int(kappa - Fraction(1, 2))  # kappa = j + 1/2
    dmu = ctx.disc.order_of(mu)
    disc_size = abs(ctx.lattice.det)
    n = m * dmu * dmu
    assert n.denominator == 1
    m0, f = _split_square(ctx, int(n))
    # sign pinned by theta-series oracles on definite lattices (D5, E7, Z^5);
    # it is the discriminant of the quadratic space extended by <-m>
    sign_pow = (ctx.lattice.rank + 3) // 2
    d_val = 2 * (-1) ** sign_pow * m0 * ctx.lattice.det
    chi = QuadraticCharacter(d_val)
    two_kappa = int(2 * kappa)
    arch = SymbolicReal.make(
        Fraction(2) ** j * m ** (j - 1) * (-1) ** (ctx.b_minus // 2), kappa, 1)
    arch = arch * _sym_sqrt(2) * _sym_sqrt(m)
    arch = arch / gamma_half(kappa) / _sym_sqrt(disc_size)
    exact = arch / zeta_exact(two_kappa - 1)
    # d^(1/2-kappa) = d^(-j) is rational: the whole Moebius sum is exact
    mob = Fraction(0)
    for d in divisors(f):
        md = moebius(d)
        if md == 0:
            continue
        mob += md * chi(d) * Fraction(d) ** (-j) * sigma(2 - two_kappa, f // d)
    rational_part = mob * _local_product(ctx, m, mu, extra_odd=True)
    if rational_part == 0:
        return Fraction(0)
    s = j  # kappa - 1/2
    try:
        lval = l_value_exact(s, chi)
        total = exact * rational_part * lval
        if not total.is_rational:
            raise NonRationalResidue(f"odd-rank exact assembly left {total}")
        return total.rational_value()
    except ParityMismatch:
        pass
    bits = max(prec_bits, 64)
    for _ in range(5):
        try:
            iv = exact.interval(bits) * l_value_interval(s, chi, bits)
            iv = iv * rational_part
            cand = rational_reconstruct(iv, den_bound=den_bound)
        except AmbiguousInterval:
            bits *= 2
            continue
        if cand is None:
            bits *= 2
            continue
        check = exact.interval(2 * bits) * l_value_interval(s, chi, 2 * bits)
        check = check * rational_part
        if check.contains(cand):
            return cand
        bits *= 2
    raise NonRationalResidue(
        f"interval reconstruction failed for (m={m}, mu={mu}) at {bits} bits")


def eis_coefficient(lattice, m, mu, disc=None, prec_bits=96, ctx=None,
                    den_bound=1 << 64):
    """Coefficient e(m, mu) of the Eisenstein series, as an exact rational.

    m = 0 is the documented constant term (1 at mu = 0, else 0), not a
    formula evaluation.  den_bound caps the denominator accepted by the
    interval-reconstruction fallback on the half-integer-weight path.
    """
    if ctx is None:
        ctx = context(lattice, disc)
    m = Fraction(m)
    mu = ctx.disc.check(mu)
    if m < 0:
        raise PreconditionError("m must be non-negative")
    if (m - ctx.disc.q_value(mu)).denominator != 1:
        raise PreconditionError("m must be congruent to Q(mu) mod 1")
    if m == 0:
        return Fraction(1) if mu == ctx.disc.zero() else Fraction(0)
    if ctx.kappa.denominator == 1:
        return _eis_even(ctx, m, mu)
    return _eis_odd(ctx, m, mu, prec_bits, den_bound)


def eis_expansion(lattice, trunc, disc=None, prec_bits=96, den_bound=1 << 64):
    """Assemble the series up to exponent trunc (exclusive); sign tag +1.

    Coefficients are computed once per {mu, -mu} orbit; the kappa = 2
    boundary is recorded on the series as hecke_flag.
    """
    ctx = context(lattice, disc)
    trunc = Fraction(trunc)
    if trunc <= 0:
        raise PreconditionError("trunc must be positive")
    den = lattice.level
    coeffs = {}
    done = {}
    for mu in ctx.disc.elements():
        neg = ctx.disc.neg(mu)
        base = ctx.disc.q_value(mu)  # exponents in base + Z, within [0, trunc)
        if mu == ctx.disc.zero():
            coeffs[(0, mu)] = Fraction(1)
        k = 0 if base > 0 else 1
        while base + k < trunc:
            m = base + k
            key = (m, mu) if (mu <= neg) else (m, neg)
            if key not in done:
                done[key] = eis_coefficient(lattice, m, key[1], disc=ctx.disc,
                                            prec_bits=prec_bits, ctx=ctx,
                                            den_bound=den_bound)
            c = done[key]
            if c:
                coeffs[(int(m * den), mu)] = c
            k += 1
    return VVQSeries(ctx.disc, den, 1, trunc, coeffs,
                     hecke_flag=ctx.hecke_boundary)


@dataclass(frozen=True)
class LowerBoundRow:
    m: Fraction
    mu: tuple
    coefficient: Fraction
    ratio: float
    ratio_exact: object  # Fraction for integer kappa, None otherwise


@dataclass(frozen=True)
class LowerBoundReport:
    kappa: Fraction
    exponent: Fraction  # kappa - 1, or kappa - 1 - eps at the boundary
    rows: tuple
    running_min: tuple  # prefix minima of the float ratios

    @property
    def all_positive(self):
        return all(r.ratio > 0 for r in self.rows)


def lower_bound_report(lattice, pairs, bound_a, eps=Fraction(1, 10), disc=None,
                       prec_bits=96):
    """Ratios (-1)^(b-/2) e(m,mu) / m^(kappa-1) with admissibility checks.

    Every pair must be represented by its coset and have ord_p(m) <= bound_a
    at all p | 2N; strict positivity of every ratio is asserted.
    """
    ctx = context(lattice, disc)
    exponent = ctx.kappa - 1 - (eps if ctx.hecke_boundary else 0)
    sign = (-1) ** (ctx.b_minus // 2)
    rows = []
    mins = []
    cur = None
    for m, mu in pairs:
        m = Fraction(m)
        mu = ctx.disc.check(mu)
        for p in ctx.primes:
            num, den = m.numerator, m.denominator
            v = 0
            while num % p == 0:
                num //= p
                v += 1
            while den % p == 0:
                den //= p
                v -= 1
            if v > bound_a:
                raise NotAdmissible(f"ord_{p}({m}) = {v} > {bound_a}")
        rep = coset_represents(lattice, m, mu, disc=ctx.disc)
        if rep != RepResult.REPRESENTED:
            raise NotAdmissible(f"({m}, {mu}) not certified represented: {rep.name}")
        e = eis_coefficient(lattice, m, mu, disc=ctx.disc,
                            prec_bits=prec_bits, ctx=ctx)
        num = sign * e
        if exponent.denominator == 1:
            ratio_exact = num / m ** int(exponent)
            ratio = float(ratio_exact)
        else:
            ratio_exact = None
            ratio = float(num) / float(m) ** float(exponent)
        if ratio <= 0:
            raise PositivityViolation(
                f"ratio for (m={m}, mu={mu}) is {ratio} <= 0")
        cur = ratio if cur is None else min(cur, ratio)
        mins.append(cur)
        rows.append(LowerBoundRow(m, mu, e, ratio, ratio_exact))
    return LowerBoundReport(ctx.kappa, exponent, tuple(rows), tuple(mins))
