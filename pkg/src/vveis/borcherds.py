"""Constructive input data for holomorphic products with prescribed divisors.

Three kinds of certified data come out of this module: an auxiliary series
with non-negative coefficients and a proven positivity window (build_h), a
two-term split f = f1 - f2 into principal parts that are individually
non-negative (decompose), and principal parts whose pairing against every
cusp element of an external basis fixture vanishes while the constant slot
stays nonzero (prescribe, vanish_on).  Cusp bases are consumed as fixtures
with provenance strings, never computed here.

Conventions: principal parts live on the discriminant form of the signature
(n, 2) lattice with sign tag -1, so an index pair (m, mu) satisfies
m = Q(mu) mod 1 and refers to the coefficient at exponent -m.  Auxiliary
series live on the negated side (sign +1) with the shared element encoding,
which makes coefficients transferable between the two by negating exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .arith import factorize
from .eisenstein import context as eis_context
from .eisenstein import eis_coefficient, eis_expansion
from .errors import (
    BudgetExhausted,
    ConsistencyError,
    FixtureNotABasis,
    HypothesisNotVerified,
    IncompatibleDiscriminantForms,
    NotAdmissible,
    PositivityViolation,
    PreconditionError,
    TruncationInsufficient,
    UnsupportedWeight,
)
from .lattice import (
    coset_represents,
    discriminant_form,
    t_max,
    witt_rank_bounded,
)
from .qseries import PrincipalPart
from .weilrep import invariants, weil_matrices


def _ord_p(x, p):
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _search_primes(lattice):
    return tuple(sorted(factorize(2 * lattice.level)))


@dataclass(frozen=True)
class AdmissibleSetSpec:
    """Search set of index pairs: an explicit list or a filtered grid.

    bound_a caps ord_p(m) at every prime dividing twice the level.  Either
    members lists the pairs explicitly, or every congruence-compatible pair
    with m <= ceiling is enumerated and filtered through predicate.  The set
    is always treated as closed under mu <-> -mu, because the divisors
    indexed by a pair and by its negative coincide.
    """

    bound_a: int
    members: tuple = None
    predicate: object = None
    ceiling: object = None

    def __post_init__(self):
        object.__setattr__(self, "bound_a", int(self.bound_a))
        if self.bound_a < 1:
            raise PreconditionError("bound_a must be a positive integer")
        if (self.members is None) == (self.ceiling is None):
            raise PreconditionError(
                "exactly one of members and ceiling must be given")
        if self.members is not None:
            object.__setattr__(self, "members", tuple(
                (Fraction(m), tuple(int(x) for x in mu))
                for m, mu in self.members))
        if self.ceiling is not None:
            object.__setattr__(self, "ceiling", Fraction(self.ceiling))


def _candidate_pairs(spec, disc):
    """Deterministic candidate order: ascending m, then element order.

    Explicit members are validated against the discriminant form; grid mode
    walks each coset's congruence class up to the ceiling.  The result is
    deduplicated and closed under negation.
    """
    index = {mu: i for i, mu in enumerate(disc.elements())}
    if spec.members is not None:
        raw = [(m, disc.check(mu)) for m, mu in spec.members]
    else:
        raw = []
        for mu in disc.elements():
            m = disc.q_value(mu)
            if m == 0:
                m = Fraction(1)
            while m <= spec.ceiling:
                if spec.predicate is None or spec.predicate(m, mu):
                    raw.append((m, mu))
                m += 1
    seen, pairs = set(), []
    for m, mu in raw:
        for nu in (mu, disc.neg(mu)):
            if (m, nu) not in seen:
                seen.add((m, nu))
                pairs.append((m, nu))
    pairs.sort(key=lambda p: (p[0], index[p[1]]))
    return pairs


@dataclass(frozen=True)
class AdmissibilityReport:
    accepted: tuple  # (m, mu) pairs, in candidate order
    rejected: tuple  # ((m, mu), reason) records, never silently dropped

    @property
    def ok(self):
        return not self.rejected


def check_admissible(lattice, spec, disc=None):
    """Verify every candidate pair of the spec, itemizing all failures.

    A pair passes when m is positive, congruent to Q(mu) mod 1, has
    ord_p(m) <= bound_a at each prime dividing twice the level, and the
    coset actually represents m (an inconclusive bounded search counts as
    a failure and is reported as such).
    """
    if disc is None:
        disc = discriminant_form(lattice)
    primes = _search_primes(lattice)
    accepted, rejected = [], []
    for m, mu in _candidate_pairs(spec, disc):
        if m <= 0:
            rejected.append(((m, mu), "index must be positive"))
            continue
        if (m - disc.q_value(mu)).denominator != 1:
            rejected.append(
                ((m, mu), f"{m} is not congruent to Q({mu}) mod 1"))
            continue
        bad = next((p for p in primes if _ord_p(m, p) > spec.bound_a), None)
        if bad is not None:
            rejected.append(
                ((m, mu),
                 f"ord_{bad}({m}) exceeds the valuation bound {spec.bound_a}"))
            continue
        res = coset_represents(lattice, m, mu, disc=disc)
        if not res.is_yes:
            rejected.append(
                ((m, mu), f"representability check returned {res.name}"))
            continue
        accepted.append((m, mu))
    return AdmissibilityReport(tuple(accepted), tuple(rejected))


class ModularBasisFixture:
    """Externally supplied basis data for one weight.

    Elements are vector-valued series with a common discriminant form, sign
    tag +1 and uniform truncation; cusp_flags marks the elements that vanish
    at infinity.  The data is trusted up to the recorded provenance, but the
    structural checks below run at construction and a violation is reported
    as FixtureNotABasis.
    """

    __slots__ = ("weight", "elements", "cusp_flags", "provenance")

    def __init__(self, weight, elements, cusp_flags, provenance=""):
        self.weight = Fraction(weight)
        self.elements = tuple(elements)
        self.cusp_flags = tuple(bool(f) for f in cusp_flags)
        self.provenance = str(provenance)
        if len(self.elements) != len(self.cusp_flags):
            raise FixtureNotABasis("one cusp flag per element is required")
        if not self.elements:
            return
        first = self.elements[0]
        for g in self.elements:
            if g.disc != first.disc:
                raise FixtureNotABasis(
                    "elements live on different discriminant forms")
            if g.sign != 1:
                raise FixtureNotABasis(
                    "elements must carry the lattice-side exponent grid")
            if g.trunc != first.trunc:
                raise FixtureNotABasis(
                    "truncation must be uniform across the basis")
        if first.trunc <= 0:
            raise FixtureNotABasis("truncation does not reach the constant term")
        for i, (g, flag) in enumerate(zip(self.elements, self.cusp_flags)):
            if not flag:
                continue
            for mu in g.disc.elements():
                if g.coefficient(0, mu) != 0:
                    raise FixtureNotABasis(
                        f"cusp-flagged element {i} has a nonzero constant "
                        f"term at {mu}")

    @property
    def disc(self):
        return self.elements[0].disc if self.elements else None

    @property
    def trunc(self):
        return self.elements[0].trunc if self.elements else None

    def cusp_elements(self):
        return [g for g, f in zip(self.elements, self.cusp_flags) if f]


@dataclass(frozen=True)
class FunctionalRow:
    """One row of the coefficient-extraction elimination state.

    vector holds the row's pairing values against the cusp basis after
    reduction; combination expands the row over the raw symmetrized
    coefficient functionals it was built from; eis_value is the row paired
    against the Eisenstein series.  pivot is the leading nonzero position.
    """

    pair: tuple
    vector: tuple
    combination: tuple
    eis_value: Fraction
    pivot: int
    origin: str = "candidate"


class EisensteinProvider:
    """Auxiliary-series source backed by the exact Eisenstein pipeline.

    Only one weight is expressible this way: half the rank of the series
    lattice.  legal_bs solves that constraint for the pole depth.
    """

    name = "eisenstein"

    def legal_bs(self, lminus):
        n = lminus.sig_neg
        return (n // 12,) if n > 0 and n % 12 == 0 else ()

    def supports(self, lminus, k):
        return k == Fraction(lminus.rank, 2)

    def series(self, lminus, k, trunc, disc=None):
        return eis_expansion(lminus, trunc, disc=disc)


class FixtureProvider:
    """Auxiliary-series source reading one element of a basis fixture."""

    name = "fixture"

    def __init__(self, fixture, index=0):
        self.fixture = fixture
        self.element = fixture.elements[index]
        self.weight = fixture.weight

    def legal_bs(self, lminus):
        b = (self.weight - 1 + Fraction(lminus.sig_neg, 2)) / 12
        return (int(b),) if b.denominator == 1 and b >= 1 else ()

    def supports(self, lminus, k):
        return k == self.weight

    def series(self, lminus, k, trunc, disc=None):
        s = self.element
        if s.trunc < trunc:
            raise TruncationInsufficient(
                f"fixture truncation {s.trunc} is below the required {trunc}")
        if disc is not None and s.disc != disc:
            raise IncompatibleDiscriminantForms(
                "fixture series lives on a different discriminant form")
        return s


def build_h(lminus, b, trunc, provider=None, disc=None):
    """Auxiliary series with non-negative coefficients, certified window.

    Multiplies a weight 1 - n/2 + 12b provider series on the signature
    (2, n) lattice by the discriminant series to the power -b, then checks
    exhaustively on the truncation that every coefficient is >= 0 and that
    every on-grid coefficient with exponent >= T - b is strictly positive,
    where T is the largest first represented value over all cosets of the
    negated (n, 2) side.
    """
    b = int(b)
    if b < 1:
        raise PreconditionError("b must be a positive integer")
    if lminus.sig_pos != 2:
        raise PreconditionError("expected a lattice of signature (2, n)")
    n = lminus.sig_neg
    k = 1 - Fraction(n, 2) + 12 * b
    if k <= 2:
        raise PreconditionError(
            f"weight {k} <= 2 is outside the convergent regime")
    if disc is None:
        disc = discriminant_form(lminus)
    if provider is None:
        provider = EisensteinProvider()
    if not provider.supports(lminus, k):
        raise UnsupportedWeight(
            f"no {provider.name} series of weight {k} for this lattice")
    trunc = Fraction(trunc)
    if trunc < 1:
        raise PreconditionError("trunc must reach past the constant term")
    series = provider.series(lminus, k, trunc + b, disc=disc)
    if series.disc != disc:
        raise IncompatibleDiscriminantForms(
            "provider series lives on a different discriminant form")
    for exp, mu, c in series.items():
        if c < 0:
            raise PositivityViolation(
                f"provider coefficient at ({exp}, {mu}) is negative: {c}")
    h = series.mul_delta_pow(-b)
    for exp, mu, c in h.items():
        if c < 0:
            raise PositivityViolation(
                f"coefficient at ({exp}, {mu}) is negative: {c}")
    window_low = t_max(lminus.negated(), disc=disc.negated()) - b
    for mu in disc.elements():
        base = disc.q_value(mu)
        e = base + math.ceil(window_low - base)
        while e < h.trunc:
            if h.coefficient(e, mu) <= 0:
                raise PositivityViolation(
                    f"window coefficient at ({e}, {mu}) is not positive")
            e += 1
    return h


@dataclass(frozen=True)
class DecomposeResult:
    f1: PrincipalPart
    f2: PrincipalPart
    c: int
    b: int
    h: object  # the auxiliary series the split was built from


def decompose(f, lattice, provider=None, minimal=False, disc=None):
    """Split f into holomorphic-quotient data f1 - f2 with f2 = c * h.

    b is the smallest provider-legal pole depth whose window clears the pole
    order of f; c is the smallest positive integer making every entry of
    f + c*h non-negative, pushed up to the denominator lcm of h's negative
    side when f is integral so that both outputs stay integral.  With
    minimal=True an already non-negative f is returned unchanged against an
    empty second part.
    """
    if disc is None:
        disc = discriminant_form(lattice)
    if f.disc != disc:
        raise IncompatibleDiscriminantForms(
            "principal part lives on a different discriminant form")
    if f.sign != -1:
        raise PreconditionError(
            "principal part must carry the negated-side sign tag")
    if lattice.sig_neg != 2:
        raise PreconditionError("expected a lattice of signature (n, 2)")
    if provider is None:
        provider = EisensteinProvider()
    lminus = lattice.negated()
    T = t_max(lattice, disc=disc)
    pole = f.pole_order() or Fraction(0)
    b = next((bb for bb in provider.legal_bs(lminus) if bb - T > pole), None)
    if b is None:
        raise UnsupportedWeight(
            f"no provider-legal pole depth clears T = {T} plus the pole "
            f"order {pole}")
    h = build_h(lminus, b, Fraction(1), provider=provider,
                disc=disc.negated())
    neg_entries = {}
    for (num, mu), ch in h.coeffs.items():
        if num < 0:
            neg_entries[(Fraction(-num, h.den), mu)] = ch
    zero = disc.zero()
    h0 = h.coefficient(0, zero)
    if minimal and all(cf >= 0 for cf in f.entries.values()):
        empty = PrincipalPart(disc, {}, 0, sign=-1)
        return DecomposeResult(f, empty, 0, b, h)
    c0 = 1
    for (m, mu), cf in f.items():
        if cf >= 0:
            continue
        ch = neg_entries.get((m, mu), Fraction(0))
        if ch <= 0:
            raise ConsistencyError(
                f"window coefficient at ({m}, {mu}) is not positive")
        c0 = max(c0, math.ceil(Fraction(-cf, ch)))
    d = 1
    if f.integral and neg_entries:
        d = lcm(*[ch.denominator for ch in neg_entries.values()])
    c = d * math.ceil(Fraction(c0, d))
    if c > 1:
        # one step down must break non-negativity or integrality
        smaller = c - 1
        nonneg = all(cf + smaller * neg_entries.get(key, Fraction(0)) >= 0
                     for key, cf in f.entries.items())
        integral = not f.integral or all(
            (smaller * ch).denominator == 1 for ch in neg_entries.values())
        if nonneg and integral:
            raise ConsistencyError("chosen multiplier is not minimal")
    f1_entries = dict(f.entries)
    for key, ch in neg_entries.items():
        f1_entries[key] = f1_entries.get(key, Fraction(0)) + c * ch
    if any(v < 0 for v in f1_entries.values()):
        raise ConsistencyError("holomorphic side has a negative entry")
    f1 = PrincipalPart(disc, f1_entries, f.const_term + c * h0, sign=-1)
    f2 = PrincipalPart(disc, {key: c * ch for key, ch in neg_entries.items()},
                       c * h0, sign=-1)
    diff = dict(f1.entries)
    for key, v in f2.entries.items():
        diff[key] = diff.get(key, Fraction(0)) - v
    diff = {key: v for key, v in diff.items() if v != 0}
    if diff != f.entries or f1.const_term - f2.const_term != f.const_term:
        raise ConsistencyError("decomposition does not subtract back to f")
    return DecomposeResult(f1, f2, c, b, h)


@dataclass(frozen=True)
class ObstructionReport:
    ok: bool
    values: tuple      # pairing value per cusp-flagged element, fixture order
    violations: tuple  # (element index, value) for each nonzero pairing


def obstruction_check(pp, fixture):
    """Pair the principal part against every cusp-flagged fixture element.

    The pairing sums c(m, nu) * b(m, nu) over the principal-part support;
    it must vanish for every cusp element for pp to extend to an actual
    form.  Exact rational arithmetic throughout.
    """
    maxm = pp.pole_order()
    values, violations = [], []
    for i, (g, flag) in enumerate(zip(fixture.elements, fixture.cusp_flags)):
        if not flag:
            continue
        if pp.disc != g.disc:
            raise IncompatibleDiscriminantForms(
                "fixture lives on a different discriminant form")
        if maxm is not None and g.trunc <= maxm:
            raise TruncationInsufficient(
                f"fixture truncation {g.trunc} cannot read index {maxm}")
        val = sum((c * g.coefficient(m, mu) for (m, mu), c in pp.items()),
                  Fraction(0))
        values.append(val)
        if val != 0:
            violations.append((i, val))
    return ObstructionReport(not violations, tuple(values), tuple(violations))


def constant_term(pp, lattice, disc=None, override=False):
    """Constant slot forced by the principal part: minus its Eisenstein pairing.

    Valid when n > 2, or when n = 2 and the lattice does not split two
    hyperbolic planes.  The bounded Witt-rank search can only certify the
    failing case, so for n = 2 the caller must pass override to assert the
    hypothesis; the value itself is an exact rational.
    """
    if disc is None:
        disc = discriminant_form(lattice)
    if pp.disc != disc:
        raise IncompatibleDiscriminantForms(
            "principal part lives on a different discriminant form")
    if lattice.sig_neg != 2:
        raise PreconditionError("expected a lattice of signature (n, 2)")
    if lattice.sig_pos == 2 and not override:
        wr = witt_rank_bounded(lattice)
        if wr.lower_bound >= 2:
            raise HypothesisNotVerified(
                "the lattice splits two hyperbolic planes, so the "
                "constant-term formula does not apply at n = 2")
        raise HypothesisNotVerified(
            "Witt rank below 2 cannot be certified by bounded search; "
            "pass override to assert it")
    ctx = eis_context(lattice, disc)
    cache = {}
    return -sum((c * _eis(ctx, cache, m, mu) for (m, mu), c in pp.items()),
                Fraction(0))


def _eis(ctx, cache, m, mu):
    key = (m, mu)
    if key not in cache:
        cache[key] = eis_coefficient(ctx.lattice, m, mu, ctx=ctx)
    return cache[key]


def prescribe(lattice, spec, fixture, budget=None, disc=None):
    """Principal part supported on the spec, orthogonal to every cusp element.

    Candidates stream in the declared order; each symmetrized coefficient
    functional is reduced against the rows accumulated so far (exact
    Gaussian elimination on the cusp-pairing vectors).  A candidate whose
    reduced vector vanishes is a kernel combination; the first one whose
    pairing against the Eisenstein series is nonzero becomes the output,
    scaled to integral entries, with the constant slot set to minus that
    pairing.  When n = 2 and the lattice certifiably splits two hyperbolic
    planes, a zero pairing is accepted too and the constant slot is repaired
    from an invariant vector of the Weil representation, mirroring the
    overlattice argument this case needs.
    """
    if disc is None:
        disc = discriminant_form(lattice)
    if lattice.sig_neg != 2 or lattice.sig_pos < 2:
        raise PreconditionError(
            "prescription needs signature (n, 2) with n >= 2")
    ctx = eis_context(lattice, disc)
    if fixture.weight != ctx.kappa:
        raise FixtureNotABasis(
            f"fixture weight {fixture.weight} does not match the pairing "
            f"weight {ctx.kappa}")
    if fixture.elements and fixture.disc != disc:
        raise IncompatibleDiscriminantForms(
            "fixture lives on a different discriminant form")
    report = check_admissible(lattice, spec, disc)
    if report.rejected:
        raise NotAdmissible("; ".join(
            f"({m}, {mu}): {why}" for (m, mu), why in report.rejected))
    index = {mu: i for i, mu in enumerate(disc.elements())}
    folded = [(m, mu) for m, mu in report.accepted
              if index[mu] <= index[disc.neg(mu)]]
    limit = len(folded) if budget is None else min(int(budget), len(folded))
    witt2 = lattice.sig_pos == 2 and witt_rank_bounded(lattice).lower_bound >= 2
    gs = fixture.cusp_elements()
    rows = []
    zero_evals = []
    cache = {}
    winner = None
    for m, mu in folded[:limit]:
        for g in gs:
            if g.trunc <= m:
                raise TruncationInsufficient(
                    f"fixture truncation {g.trunc} cannot read index {m}")
        factor = 1 if disc.neg(mu) == mu else 2
        vec = [factor * g.coefficient(m, mu) for g in gs]
        ev = factor * _eis(ctx, cache, m, mu)
        combo = {(m, mu): Fraction(1)}
        for row in rows:
            x = vec[row.pivot]
            if x:
                r = x / row.vector[row.pivot]
                vec = [a - r * bb for a, bb in zip(vec, row.vector)]
                ev -= r * row.eis_value
                for key, val in row.combination:
                    combo[key] = combo.get(key, Fraction(0)) - r * val
        if any(vec):
            pivot = next(i for i, x in enumerate(vec) if x)
            rows.append(FunctionalRow(
                (m, mu), tuple(vec), tuple(sorted(combo.items())),
                ev, pivot))
            if len(rows) > len(gs):
                raise FixtureNotABasis(
                    "more independent projections than cusp elements")
            continue
        if ev != 0 or witt2:
            winner = (combo, ev)
            break
        zero_evals.append((m, mu))
    if winner is None:
        err = BudgetExhausted(
            f"examined {limit} candidate(s): {len(rows)} independent cusp "
            f"projections, {len(zero_evals)} kernel combination(s) pairing "
            f"to zero against the Eisenstein series")
        err.zero_evaluations = tuple(zero_evals)
        raise err
    combo, ev = winner
    entries = {}
    for (m, mu), t in combo.items():
        if t == 0:
            continue
        entries[(m, mu)] = t
        entries[(m, disc.neg(mu))] = t
    lam = lcm(*[t.denominator for t in entries.values()])
    entries = {key: t * lam for key, t in entries.items()}
    const = -sum(t * _eis(ctx, cache, m, mu)
                 for (m, mu), t in entries.items())
    if const != -lam * ev:
        raise ConsistencyError("pairing evaluated two ways disagrees")
    if witt2 and const == 0:
        # repair the constant slot from an invariant vector with nonzero
        # zero-component; the principal part itself is unchanged
        vecs = [v for v in invariants(weil_matrices(disc.negated()))
                if v[0] != 0]
        if not vecs:
            raise HypothesisNotVerified(
                "no invariant vector with a nonzero zero-component exists "
                "to repair the constant slot")
        const = abs(vecs[0][0])
    allowed = set(report.accepted)
    if any(key not in allowed for key in entries):
        raise ConsistencyError("assembled support escapes the admissible set")
    pp = PrincipalPart(disc, entries, const, sign=-1)
    if not pp.integral:
        raise ConsistencyError("integrality scaling failed")
    if pp.const_term == 0:
        raise ConsistencyError("zero constant slot escaped the search")
    if not obstruction_check(pp, fixture).ok:
        raise ConsistencyError(
            "assembled principal part fails the pairing it was built for")
    return pp


def vanish_on(lattice, m, mu, fixture, provider=None, budget=None, pp=None,
              disc=None):
    """Non-negative integral principal part with a positive entry at (m, mu).

    Runs prescribe on the singleton-seeded spec (or validates a caller
    supplied principal part), then decomposes; the holomorphic side keeps a
    positive entry at the target because the added series is non-negative
    with a strictly positive window over the whole pole range.
    """
    if disc is None:
        disc = discriminant_form(lattice)
    m = Fraction(m)
    mu = disc.check(mu)
    if m <= 0 or (m - disc.q_value(mu)).denominator != 1:
        raise NotAdmissible(
            f"{m} is not a positive value of Q on the coset {mu}")
    res = coset_represents(lattice, m, mu, disc=disc)
    if not res.is_yes:
        raise NotAdmissible(
            f"({m}, {mu}) representability check returned {res.name}")
    if pp is None:
        bound = max([1] + [_ord_p(m, p) for p in _search_primes(lattice)])
        seed = AdmissibleSetSpec(bound_a=bound, members=((m, mu),))
        pp = prescribe(lattice, seed, fixture, budget=budget, disc=disc)
    else:
        if pp.disc != disc:
            raise IncompatibleDiscriminantForms(
                "principal part lives on a different discriminant form")
        if pp.entries.get((m, mu), Fraction(0)) <= 0:
            raise PreconditionError(
                f"supplied principal part has no positive entry at "
                f"({m}, {mu})")
        if not pp.integral:
            raise PreconditionError(
                "supplied principal part must be integral")
        if not obstruction_check(pp, fixture).ok:
            raise PreconditionError(
                "supplied principal part fails the cusp pairing")
    result = decompose(pp, lattice, provider=provider, disc=disc)
    out = result.f1
    if out.entries.get((m, mu), Fraction(0)) <= 0:
        raise ConsistencyError("target entry did not stay positive")
    if any(v < 0 for v in out.entries.values()) or not out.integral:
        raise ConsistencyError(
            "holomorphic side is not non-negative and integral")
    if not obstruction_check(out, fixture).ok:
        raise ConsistencyError("holomorphic side fails the cusp pairing")
    return out
