"""Quadratic characters, Bernoulli numbers, and exact or certified L-values.

The exact path evaluates L(s, chi) for primitive quadratic chi with matching
parity through the functional equation and generalized Bernoulli numbers,
carrying pi-powers and square roots symbolically (SymbolicReal) so that the
final Eisenstein assembly can assert an exactly rational outcome.  The
certified path returns rational-endpoint intervals from an Euler-Maclaurin
Hurwitz zeta with a first-omitted-term remainder bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, isqrt

from .errors import (
    AmbiguousInterval,
    NonPrimitive,
    ParityMismatch,
    PreconditionError,
)


def factorize(n):
    """{prime: exponent} for |n|, n != 0."""
    n = abs(int(n))
    if n == 0:
        raise PreconditionError("cannot factor 0")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    facs = factorize(n)
    out = [1]
    for p, e in facs.items():
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def moebius(n):
    n = int(n)
    if n < 1:
        raise PreconditionError("moebius needs n >= 1")
    facs = factorize(n) if n > 1 else {}
    if any(e > 1 for e in facs.values()):
        return 0
    return (-1) ** len(facs)


def kronecker(a, n):
    """Kronecker symbol (a|n), full convention (n = 0, negative, even)."""
    a, n = int(a), int(n)
    if n == 0:
        return 1 if abs(a) == 1 else 0
    if a % 2 == 0 and n % 2 == 0:
        return 0
    k = 1
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -k
    if n < 0:
        n = -n
        if a < 0:
            k = -k
    a %= n
    while a != 0:
        v = 0
        while a % 2 == 0:
            a //= 2
            v += 1
        if v % 2 == 1 and n % 8 in (3, 5):
            k = -k
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a, n = n % a, a
    return k if n == 1 else 0


def _fundamental_discriminant(d):
    """D0 with chi_d = chi_{D0} as characters (primitive part)."""
    d = int(d)
    if d == 0:
        raise PreconditionError("character discriminant must be nonzero")
    if d % 4 not in (0, 1):
        d *= 4  # (d|.) and (4d|.) agree as functions
    s = 1 if d > 0 else -1
    for p, e in factorize(d).items():
        if e % 2:
            s *= p
    return s if s % 4 == 1 else 4 * s


class QuadraticCharacter:
    """chi_D(a) = (D|a) with Kronecker-symbol semantics."""

    def __init__(self, d):
        self.d = int(d)
        if self.d == 0:
            raise PreconditionError("character discriminant must be nonzero")
        if self.d % 4 == 3:
            # (d|.) with d = 3 mod 4 is nonzero at even arguments, so it is
            # not induced by its fundamental part; the discriminant 4d is.
            raise PreconditionError(
                f"{self.d} = 3 mod 4 is not a character discriminant; use {4 * self.d}")
        self.d0 = _fundamental_discriminant(self.d)
        self.conductor = abs(self.d0)
        self.parity = 1 if self.d0 > 0 else -1  # chi(-1)

    def __call__(self, a):
        return kronecker(self.d, a)

    @property
    def is_primitive(self):
        return self.d == self.d0 or (self.d == 1 and self.d0 == 1)

    def primitive_part(self):
        return QuadraticCharacter(self.d0)

    @property
    def modulus(self):
        d = self.d
        return abs(d) if d % 4 in (0, 1) else 4 * abs(d)

    def __repr__(self):
        return f"QuadraticCharacter({self.d})"

    def __eq__(self, other):
        return isinstance(other, QuadraticCharacter) and self.d == other.d

    def __hash__(self):
        return hash(("QuadraticCharacter", self.d))


CHI_TRIVIAL = QuadraticCharacter(1)


def sigma(s, a, chi=None):
    """Divisor sum sum_{d | a} chi(d) d^s, exact rational (s may be negative)."""
    a = int(a)
    if a < 1:
        raise PreconditionError("sigma needs a >= 1")
    total = Fraction(0)
    for d in divisors(a):
        c = chi(d) if chi is not None else 1
        if c:
            total += c * Fraction(d) ** s
    return total


@lru_cache(maxsize=None)
def bernoulli(n):
    """Classical Bernoulli number B_n (B_1 = -1/2)."""
    if n == 0:
        return Fraction(1)
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    return -sum(comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def bernoulli_poly(n, x):
    x = Fraction(x)
    return sum(comb(n, k) * bernoulli(k) * x ** (n - k) for k in range(n + 1))


def bernoulli_gen(n, chi):
    """Generalized Bernoulli number B_{n,chi} for primitive chi.

    B_{n,chi} = q^{n-1} sum_{a=1}^{q} chi(a) B_n(a/q); the parity vanishing
    B_{n,chi} = 0 for chi(-1) != (-1)^n is asserted (except the classical
    B_1 = -1/2 edge at the trivial character).
    """
    if n < 1:
        raise PreconditionError("bernoulli_gen needs n >= 1")
    if not chi.is_primitive:
        raise NonPrimitive(f"chi_{chi.d} is not primitive (D0 = {chi.d0})")
    q = chi.conductor
    val = Fraction(q) ** (n - 1) * sum(
        chi(a) * bernoulli_poly(n, Fraction(a, q)) for a in range(1, q + 1))
    if not (q == 1 and n == 1):
        if chi.parity != (-1) ** n:
            assert val == 0, "parity vanishing violated"
    return val


# ---------------------------------------------------------------------------
# SymbolicReal: q * pi^a * sqrt(d)


def _squarefree_split(d):
    """d = s * f^2 with s squarefree; returns (s, f)."""
    s, f = 1, 1
    for p, e in factorize(d).items():
        f *= p ** (e // 2)
        if e % 2:
            s *= p
    return s, f


@dataclass(frozen=True)
class SymbolicReal:
    """Exact real of the form q * pi^a * sqrt(d), d squarefree positive.

    a is a Fraction with denominator at most 2 (half pi-powers arise from
    Gamma at half-integers); normalization extracts square factors of the
    radicand into q.  Addition requires matching (a, d).
    """

    q: Fraction
    a: Fraction
    d: int

    @staticmethod
    def make(q, a=0, d=1):
        q = Fraction(q)
        a = Fraction(a)
        d = int(d)
        if d <= 0:
            raise PreconditionError("radicand must be positive")
        if a.denominator > 2:
            raise PreconditionError("pi-exponent denominator must divide 2")
        if q == 0:
            return SymbolicReal(Fraction(0), Fraction(0), 1)
        s, f = _squarefree_split(d)
        return SymbolicReal(q * f, a, s)

    def __mul__(self, other):
        if isinstance(other, SymbolicReal):
            return SymbolicReal.make(self.q * other.q, self.a + other.a,
                                     self.d * other.d)
        return SymbolicReal.make(self.q * Fraction(other), self.a, self.d)

    __rmul__ = __mul__

    def inverse(self):
        if self.q == 0:
            raise ZeroDivisionError("SymbolicReal zero")
        return SymbolicReal.make(Fraction(1) / (self.q * self.d), -self.a, self.d)

    def __truediv__(self, other):
        if isinstance(other, SymbolicReal):
            return self * other.inverse()
        return SymbolicReal.make(self.q / Fraction(other), self.a, self.d)

    def __add__(self, other):
        if not isinstance(other, SymbolicReal):
            other = SymbolicReal.make(Fraction(other))
        if self.q == 0:
            return other
        if other.q == 0:
            return self
        if (self.a, self.d) != (other.a, other.d):
            raise PreconditionError("cannot add SymbolicReals of unlike shape")
        return SymbolicReal.make(self.q + other.q, self.a, self.d)

    def __neg__(self):
        return SymbolicReal(-self.q, self.a, self.d)

    @property
    def is_rational(self):
        return self.q == 0 or (self.a == 0 and self.d == 1)

    def rational_value(self):
        if not self.is_rational:
            raise PreconditionError(f"not rational: {self}")
        return self.q

    def interval(self, bits=128):
        """Certified enclosing interval."""
        out = Interval.point(self.q)
        if self.d != 1:
            out = out * sqrt_interval(Fraction(self.d), bits)
        if self.a != 0:
            pi = pi_interval(bits + 16)
            num = self.a.numerator
            half = self.a.denominator == 2
            whole = num // 2 if half else num
            p = pi.power_int(whole)
            if half:  # num - 2*whole = 1 here (denominator 2, floor division)
                p = p * sqrt_interval_of(pi, bits)
            out = out * p
        return out

    def __repr__(self):
        return f"SymbolicReal({self.q}, pi^{self.a}, sqrt({self.d}))"


def gamma_half(z):
    """Gamma(z) for z in (1/2)Z, z not a non-positive integer, as SymbolicReal."""
    z = Fraction(z)
    if z.denominator == 1:
        if z < 1:
            raise PreconditionError("Gamma pole at non-positive integer")
        val = Fraction(1)
        for k in range(2, int(z)):
            val *= k
        return SymbolicReal.make(val)
    if z.denominator != 2:
        raise PreconditionError("gamma_half handles (1/2)Z only")
    # walk to Gamma(1/2) = sqrt(pi)
    coeff = Fraction(1)
    zz = z
    while zz > Fraction(1, 2):
        zz -= 1
        coeff *= zz
    while zz < Fraction(1, 2):
        coeff /= zz
        zz += 1
    return SymbolicReal.make(coeff, Fraction(1, 2), 1)


# ---------------------------------------------------------------------------
# Certified interval arithmetic (rational endpoints)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise PreconditionError("empty interval")

    @staticmethod
    def point(x):
        x = Fraction(x)
        return Interval(x, x)

    @property
    def width(self):
        return self.hi - self.lo

    def __add__(self, other):
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_interval(other))

    def __rsub__(self, other):
        return _as_interval(other) - self

    def __mul__(self, other):
        other = _as_interval(other)
        cands = [self.lo * other.lo, self.lo * other.hi,
                 self.hi * other.lo, self.hi * other.hi]
        return Interval(min(cands), max(cands))

    __rmul__ = __mul__

    def inverse(self):
        if self.lo <= 0 <= self.hi:
            raise PreconditionError("interval straddles zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * _as_interval(other).inverse()

    def power_int(self, k):
        if k == 0:
            return Interval.point(1)
        if k < 0:
            return self.power_int(-k).inverse()
        out = self
        for _ in range(k - 1):
            out = out * self
        return out

    def contains(self, x):
        return self.lo <= x <= self.hi

    def intersects(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def __repr__(self):
        return f"Interval[{float(self.lo)}, {float(self.hi)}]"


def _as_interval(x):
    if isinstance(x, Interval):
        return x
    return Interval.point(Fraction(x))


def iroot(n, k):
    """floor(n^(1/k)) for integers n >= 0, k >= 1, by Newton iteration."""
    n, k = int(n), int(k)
    if n < 0 or k < 1:
        raise PreconditionError("iroot needs n >= 0, k >= 1")
    if n in (0, 1) or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << (n.bit_length() // k + 1)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    return x


def sqrt_interval(x, bits=128):
    """Certified enclosure of sqrt(x) for rational x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise PreconditionError("negative radicand")
    if x == 0:
        return Interval.point(0)
    scale = 1 << bits
    lo_int = isqrt(x.numerator * scale * scale // x.denominator)
    return Interval(Fraction(lo_int, scale), Fraction(lo_int + 2, scale))


def sqrt_interval_of(iv, bits=128):
    lo = sqrt_interval(iv.lo, bits).lo
    hi = sqrt_interval(iv.hi, bits).hi
    return Interval(lo, hi)


def pow_interval(y, p, bits=128):
    """Certified enclosure of y^p for rational y > 0 and rational p."""
    y = Fraction(y)
    p = Fraction(p)
    if y <= 0:
        raise PreconditionError("pow_interval needs positive base")
    if p.denominator == 1:
        return Interval.point(y ** int(p))
    b = p.denominator
    scale = 1 << bits
    t = y.numerator * scale ** b // y.denominator
    r = iroot(t, b)
    root_iv = Interval(Fraction(r, scale), Fraction(r + 2, scale))
    return root_iv.power_int(p.numerator)


@lru_cache(maxsize=None)
def pi_interval(bits=128):
    """Machin's formula with certified alternating-series tails."""
    def arctan_inv(x, eps):
        # arctan(1/x) via the alternating Taylor series; error <= first omitted term
        total = Fraction(0)
        k = 0
        while True:
            term = Fraction((-1) ** k, (2 * k + 1) * x ** (2 * k + 1))
            if abs(term) < eps:
                return Interval(total - abs(term), total + abs(term))
            total += term
            k += 1

    eps = Fraction(1, 1 << (bits + 8))
    a = arctan_inv(5, eps / 32)
    b = arctan_inv(239, eps / 32)
    return 16 * a - 4 * b


# ---------------------------------------------------------------------------
# L-values


def _euler_correction_exact(chi, s):
    """Finite Euler factors converting L(s, chi_{D0}) to L(s, chi_D), exact."""
    chi0 = chi.primitive_part()
    corr = Fraction(1)
    for p in factorize(chi.modulus):
        if chi0.conductor % p != 0:
            corr *= 1 - chi0(p) * Fraction(1, p) ** s
    return corr


def l_value_exact(s, chi):
    """L(s, chi_D) as SymbolicReal, for integer s >= 1 with matching parity.

    Functional equation route: L(s, chi) = (q/pi)^(1/2-s) *
    Gamma((1-s+a)/2)/Gamma((s+a)/2) * (-B_{s,chi}/s) for the primitive part,
    times the finite Euler corrections for imprimitivity.  Root numbers of
    real primitive characters are +1, so no radicand beyond sqrt(q) appears.
    """
    s = int(s)
    if s < 1:
        raise PreconditionError("l_value_exact needs s >= 1")
    chi0 = chi.primitive_part()
    if chi0.parity != (-1) ** s:
        raise ParityMismatch(
            f"chi_{chi.d} has parity {chi0.parity}, needs (-1)^{s}")
    q = chi0.conductor
    a = 0 if chi0.parity == 1 else 1
    b = bernoulli_gen(s, chi0)
    qpi = SymbolicReal.make(Fraction(1, q) ** s, Fraction(s) - Fraction(1, 2), q)
    num = gamma_half(Fraction(1 - s + a, 2))
    den = gamma_half(Fraction(s + a, 2))
    val = qpi * num / den * Fraction(-b, s)
    return val * _euler_correction_exact(chi, s)


def zeta_exact(s):
    """zeta(s) for positive even integer s, as SymbolicReal."""
    return l_value_exact(s, CHI_TRIVIAL)


def _hurwitz_interval(s, x, terms, depth, bits):
    """Certified enclosure of zeta(s, x) = sum_{n>=0} (n+x)^{-s}, s > 1 rational.

    Euler-Maclaurin with remainder bounded by the first omitted term (valid
    since t -> (t+x)^{-s} is completely monotone).
    """
    s = Fraction(s)
    x = Fraction(x)
    total = Interval.point(0)
    for n in range(terms):
        total = total + pow_interval(n + x, -s, bits)
    mx = terms + x
    total = total + pow_interval(mx, 1 - s, bits) / (s - 1)
    total = total + pow_interval(mx, -s, bits) * Fraction(1, 2)
    # correction terms B_{2j}/(2j)! * (s)_{2j-1} * (M+x)^{-s-2j+1}
    poch = s  # (s)_1
    for j in range(1, depth + 1):
        coef = bernoulli(2 * j) / _factorial(2 * j)
        term = pow_interval(mx, -(s + 2 * j - 1), bits) * poch * coef
        total = total + term
        poch = poch * (s + 2 * j - 1) * (s + 2 * j)
    # remainder: same sign and smaller than the next term
    nxt = pow_interval(mx, -(s + 2 * depth + 1), bits) * poch \
        * (bernoulli(2 * depth + 2) / _factorial(2 * depth + 2))
    bound = max(abs(nxt.lo), abs(nxt.hi))
    return total + Interval(-bound, bound)


@lru_cache(maxsize=None)
def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def l_value_interval(s, chi, prec_bits=64):
    """Certified interval for L(s, chi), rational s >= 2 (was: > 1 suffices).

    Sums chi over residues modulo the character's modulus against Hurwitz
    zetas; width is driven down by doubling the Euler-Maclaurin cutoff.
    """
    s = Fraction(s)
    if s < 2:
        raise PreconditionError("l_value_interval needs s >= 2")
    q = chi.modulus
    target = Fraction(1, 1 << prec_bits)
    terms, depth = 16, 10
    bits = prec_bits + 64
    while True:
        total = Interval.point(0)
        qs = pow_interval(q, -s, bits)
        for r in range(1, q + 1):
            c = chi(r)
            if c:
                total = total + _hurwitz_interval(
                    s, Fraction(r, q), terms, depth, bits) * c
        total = total * qs
        if total.width <= target:
            return total
        terms *= 2
        depth += 4
        bits += 32


def zeta_interval(s, prec_bits=64):
    return l_value_interval(s, CHI_TRIVIAL, prec_bits)


def _simplest_between(lo, hi):
    """The rational with smallest denominator in [lo, hi], lo <= hi."""
    fl = lo.numerator // lo.denominator
    if fl >= lo:  # lo integral
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    inner = _simplest_between(Fraction(1) / (hi - fl), Fraction(1) / (lo - fl))
    return fl + Fraction(1) / inner


def _log2_approx(x):
    """floor(log2 x) within 1, for positive Fraction x of any size."""
    return x.numerator.bit_length() - x.denominator.bit_length()


def rational_reconstruct(iv, den_bound=1 << 64):
    """Unique rational with denominator <= den_bound inside iv, or None.

    Requires width < 1/(2 den_bound^2), which makes the candidate unique;
    wider intervals raise AmbiguousInterval.  Callers re-verify at doubled
    precision before trusting the result.
    """
    if iv.width >= Fraction(1, 2 * den_bound * den_bound):
        # exact endpoints can have astronomically long digit strings; report
        # only the magnitude of the width
        raise AmbiguousInterval(
            f"width ~ 2^{_log2_approx(iv.width)} too large for "
            f"denominator bound {den_bound}")
    cand = _simplest_between(iv.lo, iv.hi)
    if cand.denominator > den_bound:
        return None
    return cand
