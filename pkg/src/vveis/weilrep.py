"""Exact cyclotomic arithmetic and Weil representation generator matrices.

Cyclotomic numbers are sparse rational combinations of roots of unity
zeta_M^j.  The canonical form works axis-by-axis over the prime-power
factorization of M (tensor basis of Q(zeta_M)), which makes equality,
rationality and conjugation exact and cheap at the sizes this package
meets (|L'/L| <= a few hundred, M <= a few thousand).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from . import linalg
from .errors import NonRationalResidue, PreconditionError


@lru_cache(maxsize=None)
def _crt_data(m):
    """Per prime power q = p^b of m: (q, p, b, u) with sum u*(m/q) = 1 mod m.

    zeta_m^j factors as prod_i zeta_{q_i}^{j*u_i mod q_i}.
    """
    assert m >= 1
    facs = []
    rest = m
    p = 2
    while rest > 1:
        if rest % p == 0:
            b = 0
            q = 1
            while rest % p == 0:
                rest //= p
                b += 1
                q *= p
            u = pow(m // q, -1, q) if q > 1 else 0
            facs.append((q, p, b, u))
        p += 1 if p == 2 else 2
    return tuple(facs)


@lru_cache(maxsize=None)
def _axis_expansion(q, p, b, a):
    """zeta_q^a in the basis {zeta_q^t : t < phi(q)}: list of (exp, sign)."""
    phi = q - q // p
    if a < phi:
        return ((a, 1),)
    s = a - phi
    return tuple((t * p ** (b - 1) + s, -1) for t in range(p - 1))


class Cyclotomic:
    """Element of Q(zeta_M), stored as {exponent mod M: Fraction}."""

    __slots__ = ("order", "coeffs", "_canon")

    def __init__(self, order, coeffs=None):
        self.order = int(order)
        if self.order < 1:
            raise PreconditionError("cyclotomic order must be positive")
        self.coeffs = {}
        if coeffs:
            for j, c in coeffs.items():
                c = Fraction(c)
                if c:
                    j %= self.order
                    self.coeffs[j] = self.coeffs.get(j, Fraction(0)) + c
        self._canon = None

    @classmethod
    def from_rational(cls, x, order):
        return cls(order, {0: Fraction(x)})

    @classmethod
    def root(cls, order, j=1):
        """zeta_order^j."""
        return cls(order, {j % order: Fraction(1)})

    @classmethod
    def e(cls, x, order):
        """e(x) = exp(2 pi i x) for rational x with denominator dividing order."""
        ex = Fraction(x) * order
        if ex.denominator != 1:
            raise PreconditionError(f"e({x}) does not live in Q(zeta_{order})")
        return cls.root(order, int(ex))

    def _with(self, coeffs):
        out = Cyclotomic.__new__(Cyclotomic)
        out.order = self.order
        out.coeffs = coeffs
        out._canon = None
        return out

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, Fraction(0)) + c
        return self._with({j: c for j, c in out.items() if c})

    def __radd__(self, other):
        return self + other

    def __neg__(self):
        return self._with({j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            if not f:
                return self._with({})
            return self._with({j: c * f for j, c in self.coeffs.items()})
        other = self._coerce(other)
        out = {}
        for j1, c1 in self.coeffs.items():
            for j2, c2 in other.coeffs.items():
                j = (j1 + j2) % self.order
                out[j] = out.get(j, Fraction(0)) + c1 * c2
        return self._with({j: c for j, c in out.items() if c})

    def __rmul__(self, other):
        return self * other

    def conj(self):
        """Complex conjugation: exponent negation."""
        return self._with({(-j) % self.order: c for j, c in self.coeffs.items()})

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.order != self.order:
                if self.order % other.order == 0:
                    k = self.order // other.order
                    return self._with({j * k: c for j, c in other.coeffs.items()})
                raise PreconditionError("mismatched cyclotomic orders")
            return other
        return Cyclotomic.from_rational(other, self.order)

    def canonical(self):
        """Coefficients on the tensor basis: {multi-exponent tuple: Fraction}."""
        if self._canon is not None:
            return self._canon
        facs = _crt_data(self.order)
        canon = {}
        for j, c in self.coeffs.items():
            axes = []
            for q, p, b, u in facs:
                axes.append(_axis_expansion(q, p, b, (j * u) % q))
            for combo in itertools.product(*axes):
                key = tuple(t for t, _ in combo)
                sign = 1
                for _, s in combo:
                    sign *= s
                canon[key] = canon.get(key, Fraction(0)) + sign * c
        self._canon = {k: v for k, v in canon.items() if v}
        return self._canon

    def is_zero(self):
        return not self.canonical()

    def is_rational(self):
        zero_key = tuple(0 for _ in _crt_data(self.order))
        return all(k == zero_key for k in self.canonical())

    def rational_value(self):
        if not self.is_rational():
            raise NonRationalResidue(f"not rational: {self}")
        zero_key = tuple(0 for _ in _crt_data(self.order))
        return self.canonical().get(zero_key, Fraction(0))

    def exponent_dict(self):
        """Canonical form re-keyed by single exponents mod order (CRT inverse)."""
        facs = _crt_data(self.order)
        out = {}
        for key, c in sorted(self.canonical().items()):
            j = 0
            for (q, p, b, u), a in zip(facs, key):
                # invert a = j*u mod q
                j_part = (a * pow(u, -1, q)) % q if q > 1 else 0
                j += j_part * (self.order // q) * u % self.order
            out[j % self.order] = c
        return out

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except PreconditionError:
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.canonical().items()))))

    def __repr__(self):
        if not self.coeffs:
            return "Cyc(0)"
        terms = ",".join(f"{c}*z{self.order}^{j}" for j, c in sorted(self.coeffs.items()))
        return f"Cyc({terms})"


def sqrt_int(d, order):
    """sqrt(d) as a Cyclotomic for a positive integer d.

    Built multiplicatively: sqrt(p) via the quadratic Gauss sum for odd p
    (sum (x|p) zeta_p^x equals sqrt(p) or i*sqrt(p)), sqrt(2) = zeta_8 +
    zeta_8^{-1}.  Requires 8 | order when 2-parts appear, p | order and
    4 | order for each odd prime with odd multiplicity.
    """
    d = int(d)
    if d <= 0:
        raise PreconditionError("radicand must be positive")
    out = Cyclotomic.from_rational(1, order)
    rational = 1
    p = 2
    rest = d
    while rest > 1:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            rational *= p ** (e // 2)
            if e % 2:
                out = out * _sqrt_prime(p, order)
        p += 1 if p == 2 else 2
    return out * rational


@lru_cache(maxsize=None)
def _sqrt_prime(p, order):
    if p == 2:
        if order % 8:
            raise PreconditionError("sqrt(2) needs 8 | order")
        z8 = order // 8
        return Cyclotomic(order, {z8: 1, -z8 % order: 1})
    if order % (4 * p):
        raise PreconditionError(f"sqrt({p}) needs 4*{p} | order")
    from .arith import kronecker
    g = Cyclotomic(order, {(x * order // p) % order: kronecker(x, p)
                           for x in range(1, p)})
    if p % 4 == 1:
        return g
    return g * Cyclotomic.root(order, -(order // 4))  # -i * g


@dataclass(frozen=True)
class WeilMatrices:
    """Generator matrices of the Weil representation on C[L'/L]."""

    disc: object
    sig_pos: int
    sig_neg: int
    order: int
    t_mat: tuple  # diagonal entries, Cyclotomic
    s_mat: tuple  # rows of Cyclotomic


def weil_matrices(disc, signature=None):
    """T and S matrices: T = diag(e(Q(mu))), S = pref * (e(-(mu,nu))).

    The prefactor is e((b^- - b^+)/8)/sqrt(|L'/L|); signature defaults to the
    lattice the discriminant form was built from.
    """
    if signature is None:
        signature = (disc.lattice.sig_pos, disc.lattice.sig_neg)
    bp, bm = signature
    n = disc.size
    m_order = lcm(8, disc.lattice.level, 4 * n)
    els = disc.elements()
    t_mat = tuple(Cyclotomic.e(disc.q_value(mu), m_order) for mu in els)
    pref = (Cyclotomic.root(m_order, (bm - bp) * m_order // 8)
            * sqrt_int(n, m_order) * Fraction(1, n))
    s_mat = tuple(
        tuple(pref * Cyclotomic.e(-disc.bilinear(mu, nu), m_order) for nu in els)
        for mu in els)
    return WeilMatrices(disc, bp, bm, m_order, t_mat, s_mat)


def _mat_mul_cyc(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)),
                           Cyclotomic(a[0][0].order))
                       for j in range(n)) for i in range(n))


def _is_identity(mat, scale=1):
    n = len(mat)
    for i in range(n):
        for j in range(n):
            want = Fraction(scale) if i == j else Fraction(0)
            if not (mat[i][j] - want).is_zero():
                return False
    return True


def verify_relations(w):
    """Exact check of the metaplectic generator relations.

    S^4 = (-1)^(b^- - b^+) * I (the standard convention's S^2 is
    e((b^- - b^+)/4) times the coordinate flip mu -> -mu, so S^4 is only
    +I for even signature difference), (ST)^3 = S^2, S^2 central, and
    S^2 acts as a phase times the flip mu -> -mu.
    """
    els = w.disc.elements()
    n = len(els)
    idx = {mu: i for i, mu in enumerate(els)}
    s2 = _mat_mul_cyc(w.s_mat, w.s_mat)
    s4 = _mat_mul_cyc(s2, s2)
    sign = (-1) ** ((w.sig_neg - w.sig_pos) % 2)
    if not _is_identity(s4, sign):
        return False
    st = tuple(tuple(w.s_mat[i][j] * w.t_mat[j] for j in range(n)) for i in range(n))
    st3 = _mat_mul_cyc(_mat_mul_cyc(st, st), st)
    for i in range(n):
        for j in range(n):
            if not (st3[i][j] - s2[i][j]).is_zero():
                return False
    # S^2 = phase * flip
    phase = None
    for i, mu in enumerate(els):
        for j, nu in enumerate(els):
            want_nonzero = idx[w.disc.neg(nu)] == i
            entry = s2[i][j]
            if want_nonzero:
                if phase is None:
                    phase = entry
                elif not (entry - phase).is_zero():
                    return False
            elif not entry.is_zero():
                return False
    # centrality against both generators
    for gen in (w.s_mat, tuple(tuple(w.t_mat[i] if i == j else Cyclotomic(w.order)
                                     for j in range(n)) for i in range(n))):
        left = _mat_mul_cyc(s2, gen)
        right = _mat_mul_cyc(gen, s2)
        for i in range(n):
            for j in range(n):
                if not (left[i][j] - right[i][j]).is_zero():
                    return False
    return True


def is_unitary(w):
    """S * conj(S)^T = I, exactly."""
    n = len(w.s_mat)
    sc = tuple(tuple(w.s_mat[j][i].conj() for j in range(n)) for i in range(n))
    return _is_identity(_mat_mul_cyc(w.s_mat, sc))


def invariants(w):
    """Q-basis of rational vectors fixed by both T and S.

    Each cyclotomic linear constraint is expanded on the canonical tensor
    basis of Q(zeta_M), giving a rational linear system; its kernel is the
    full invariant subspace intersected with Q^(|disc|) (for rational
    unknowns the expansion loses nothing).
    """
    els = w.disc.elements()
    n = len(els)
    rows = []

    def push_rows(entry_row):
        # entry_row: list of Cyclotomic coefficients of a single equation
        basis_keys = set()
        canons = [e.canonical() for e in entry_row]
        for c in canons:
            basis_keys.update(c)
        for key in sorted(basis_keys):
            rows.append([c.get(key, Fraction(0)) for c in canons])

    one = Cyclotomic.from_rational(1, w.order)
    for i in range(n):
        push_rows([(w.t_mat[i] - one) if j == i else Cyclotomic(w.order)
                   for j in range(n)])
    for i in range(n):
        push_rows([w.s_mat[i][j] - (one if i == j else Cyclotomic(w.order))
                   for j in range(n)])
    if not rows:  # both generators are the identity: everything is invariant
        return [tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
                for i in range(n)]
    basis = linalg.kernel(rows)
    out = []
    for vec in basis:
        den = lcm(*[f.denominator for f in vec])
        ints = [int(f * den) for f in vec]
        g = gcd(*ints)
        lead = next(x for x in ints if x)
        if lead < 0:
            g = -g
        out.append(tuple(Fraction(x, g) for x in ints))
    return out
