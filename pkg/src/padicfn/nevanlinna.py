"""Value distribution theory as exact piecewise-linear arithmetic.

A meromorphic function is a quotient of entire representatives without
common zeros; all of its Nevanlinna data is expressible through the
valuation polygons of numerator, denominator, and target combinations:

    m(f, a, rho) = max(0, sup_log(den, rho) - sup_log(num - a*den, rho))
    N(f, a, rho) = corner-sum counting function of (num - a*den)
    T = m + N

"O(1) as r -> infinity" statements become "asymptotic slope <= 0 plus
an exact supremum over rho >= 0", which removes every tolerance.
Multiplicity-sensitive quantities (truncated counting, defects, total
ramification, value sharing) are restricted to exact rational
functions, where squarefree structure over the rationals is decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import ratpoly
from .errors import (
    DerivativeVanishes,
    NotCoprime,
    RequiresExact,
    TooFewTargets,
    ZeroSeries,
)
from .polygon import (
    PiecewiseLinear,
    counting_N,
    linear_pl,
    sup_log,
    sup_log_pl,
)
from .series import LaurentApprox, hasse_derivative, laurent, poly_series, to_poly
from .valued_field import INF, NEG_INF, abs_log

INFINITY = INF  # the point at infinity on the projective line


@dataclass(frozen=True)
class MeromorphicPair:
    """Quotient of entire representatives; coprime when both are exact."""

    num: LaurentApprox
    den: LaurentApprox
    coprime: bool = True

    @property
    def p(self) -> int:
        return self.num.p

    def is_exact_rational(self) -> bool:
        return self.num.exact and self.den.exact


def rational_pair(num: LaurentApprox, den: LaurentApprox) -> MeromorphicPair:
    """Build a pair from exact polynomials, reduced to lowest terms."""
    if den.is_zero():
        raise ZeroSeries("denominator is identically zero")
    if num.p != den.p:
        raise ValueError("mixed primes")
    if num.exact and den.exact and not num.is_zero():
        if min(num.coeffs, default=0) < 0 or min(den.coeffs, default=0) < 0:
            raise ValueError("entire representatives must be power series")
        a, b = to_poly(num), to_poly(den)
        g = ratpoly.gcd(a, b)
        if ratpoly.degree(g) > 0:
            a = ratpoly.divmod_(a, g)[0]
            b = ratpoly.divmod_(b, g)[0]
        return MeromorphicPair(poly_series(num.p, a), poly_series(num.p, b), True)
    return MeromorphicPair(num, den, num.exact and den.exact)


def pair_from_polys(p: int, num_coeffs, den_coeffs) -> MeromorphicPair:
    return rational_pair(poly_series(p, num_coeffs), poly_series(p, den_coeffs))


def as_pair(f) -> MeromorphicPair:
    if isinstance(f, MeromorphicPair):
        return f
    return MeromorphicPair(f, laurent(f.p, {0: Fraction(1)}))


def _require_exact(f: MeromorphicPair, what: str):
    if not f.is_exact_rational():
        raise RequiresExact(f"{what} needs an exact rational function")


def apoint_series(f: MeromorphicPair, a) -> LaurentApprox:
    """The a-point series num - a*den (den itself for a = infinity)."""
    if a == INFINITY:
        return f.den
    return f.num - f.den * Fraction(a)


def pair_sup_log(f: MeromorphicPair, rho):
    """log_p |f|_r via multiplicativity: sup_log(num) - sup_log(den)."""
    if f.num.is_zero():
        return NEG_INF
    return sup_log(f.num, rho) - sup_log(f.den, rho)


def prox_m(f: MeromorphicPair, a) -> PiecewiseLinear:
    """Proximity function m(f, a, .) = log+ |1/(f - a)|_r (log+ |f|_r at
    a = infinity), as an exact piecewise-linear function of rho."""
    if a == INFINITY:
        top, bottom = f.num, f.den
    else:
        top, bottom = f.den, apoint_series(f, a)
    if bottom.is_zero():
        raise ZeroSeries(f"f is identically {a}")
    diff = sup_log_pl(top) - sup_log_pl(bottom)
    return diff.log_plus()


def count_N(f: MeromorphicPair, a, rho_min=NEG_INF) -> PiecewiseLinear:
    """Counting function of a-points with multiplicity, from corner data."""
    g = apoint_series(f, a)
    if g.is_zero():
        raise ZeroSeries(f"f is identically {a}")
    return counting_N(g, rho_min)


def count_N1(f: MeromorphicPair, a, rho_min=NEG_INF) -> PiecewiseLinear:
    """Truncated counting function (multiplicities capped at one); exact
    rational functions only, via squarefree structure over the rationals."""
    _require_exact(f, "truncated counting")
    g = apoint_series(f, a)
    if g.is_zero():
        raise ZeroSeries(f"f is identically {a}")
    rad = ratpoly.radical(to_poly(g))
    return counting_N(poly_series(f.p, rad), rho_min)


def charT(f: MeromorphicPair, a) -> PiecewiseLinear:
    """Characteristic function T(f, a, .) = m + N."""
    return prox_m(f, a) + count_N(f, a)


def fmt_check(f: MeromorphicPair, a) -> tuple:
    """First-main-theorem check: T(f, a, .) - T(f, infinity, .) has
    asymptotic slope zero; returns (bounded, exact sup of |difference|
    over rho >= 0)."""
    _require_exact(f, "exact asymptotics")
    diff = charT(f, a) - charT(f, INFINITY)
    bounded = diff.asymptotic_slope() == 0
    bound = max(diff.sup(0, INF), (-diff).sup(0, INF))
    return bounded, bound


def derivative_pair(f: MeromorphicPair) -> MeromorphicPair:
    """First Hasse derivative via the quotient rule, in lowest terms."""
    g, h = f.num, f.den
    num = h * hasse_derivative(g, 1) - g * hasse_derivative(h, 1)
    den = h * h
    if f.is_exact_rational():
        return rational_pair(num, den)
    return MeromorphicPair(num, den, False)


def n_ram(f: MeromorphicPair) -> PiecewiseLinear:
    """Ramification counting term N(f',0,.) + 2N(f,inf,.) - N(f',inf,.)."""
    fp = derivative_pair(f)
    if fp.num.is_zero():
        raise DerivativeVanishes("f' is identically zero")
    return counting_N(fp.num) + counting_N(f.den).scale(2) - counting_N(fp.den)


def spherical_sup(f: MeromorphicPair, rho):
    """sup_log of the spherical derivative: |f'|_r / max(1, |f|_r) on the
    log scale; -infinity for constants."""
    fp = derivative_pair(f)
    if fp.num.is_zero():
        return NEG_INF
    return pair_sup_log(fp, rho) - max(Fraction(0), pair_sup_log(f, rho))


@dataclass(frozen=True)
class SmtReport:
    """Second-main-theorem slack, with and without ramification/truncation."""

    targets: tuple
    S: PiecewiseLinear  # (q-2)T - sum N + N_Ram + rho
    sup_S: object
    holds: bool
    S_no_ram: PiecewiseLinear  # (q-1)T - sum N
    holds_no_ram: bool
    S_truncated: PiecewiseLinear  # (q-2)T - sum N1 + rho
    holds_truncated: bool


def smt_report(f: MeromorphicPair, targets) -> SmtReport:
    """Slack functions of the second main theorem for q >= 3 targets.

    holds means asymptotic slope <= 0, the exact reading of the
    "<= -log r + O(1)" bound; sup_S is the exact supremum over rho >= 0.
    """
    _require_exact(f, "second main theorem report")
    targets = tuple(targets)
    if len(targets) < 3:
        raise TooFewTargets(f"need q >= 3, got {len(targets)}")
    if len({INFINITY if a == INFINITY else Fraction(a) for a in targets}) != len(targets):
        raise ValueError("targets must be distinct")
    q = len(targets)
    T = charT(f, INFINITY)
    ram = n_ram(f)
    sumN = None
    sumN1 = None
    for a in targets:
        Na = count_N(f, a)
        N1a = count_N1(f, a)
        sumN = Na if sumN is None else sumN + Na
        sumN1 = N1a if sumN1 is None else sumN1 + N1a
    rho_term = linear_pl(1)
    S = T.scale(q - 2) - sumN + ram + rho_term
    S1 = T.scale(q - 1) - sumN
    Str = T.scale(q - 2) - sumN1 + rho_term
    return SmtReport(
        targets=targets,
        S=S,
        sup_S=S.sup(0, INF),
        holds=S.asymptotic_slope() <= 0,
        S_no_ram=S1,
        holds_no_ram=S1.asymptotic_slope() <= 0,
        S_truncated=Str,
        holds_truncated=Str.asymptotic_slope() <= 0,
    )


@dataclass(frozen=True)
class AbcReport:
    lhs: PiecewiseLinear  # log max(|f|_r, |g|_r, |h|_r)
    rhs: PiecewiseLinear  # N1(fgh, 0, .) - rho
    holds: bool


def abc_check(f: LaurentApprox, g: LaurentApprox, h: LaurentApprox) -> AbcReport:
    """ABC inequality for relatively prime polynomials with f + g = h."""
    for x in (f, g, h):
        if not x.exact or (x.coeffs and min(x.coeffs) < 0):
            raise RequiresExact("abc needs exact polynomials")
    if not (f + g) == h:
        raise ValueError("inputs must satisfy f + g = h")
    fp, gp, hp = to_poly(f), to_poly(g), to_poly(h)
    for a, b in ((fp, gp), (fp, hp), (gp, hp)):
        if not ratpoly.coprime(a, b):
            raise NotCoprime("inputs share a nonconstant factor")
    if all(ratpoly.degree(x) < 1 for x in (fp, gp, hp)):
        raise DerivativeVanishes("all derivatives vanish identically")
    lhs = sup_log_pl(f).max_with(sup_log_pl(g)).max_with(sup_log_pl(h))
    product = f * g * h
    rad = ratpoly.radical(to_poly(product))
    rhs = counting_N(poly_series(f.p, rad)) - linear_pl(1)
    holds = (lhs - rhs).asymptotic_slope() <= 0
    return AbcReport(lhs, rhs, holds)


def defects(f: MeromorphicPair, targets) -> list:
    """(a, delta, theta) per target: defect = asymptotic slope of m over
    slope of T; ramification defect = 1 - slope(N1)/slope(T)."""
    _require_exact(f, "defects")
    T_slope = charT(f, INFINITY).asymptotic_slope()
    if T_slope == 0:
        raise ZeroSeries("constant function has no defects")
    out = []
    for a in targets:
        delta = prox_m(f, a).asymptotic_slope() / T_slope
        theta = 1 - count_N1(f, a).asymptotic_slope() / T_slope
        out.append((a, delta, theta))
    return out


def totally_ramified(f: MeromorphicPair, a) -> bool:
    """Whether every a-point of f (in the affine line) has multiplicity
    at least two; a value with no affine preimage is vacuously so."""
    _require_exact(f, "total ramification")
    g = apoint_series(f, a)
    if g.is_zero():
        raise ZeroSeries(f"f is identically {a}")
    poly = to_poly(g)
    if ratpoly.degree(poly) < 1:
        return True  # omitted value: empty preimage set
    _, parts = ratpoly.squarefree_decomposition(poly)
    return all(i >= 2 for _, i in parts)


def totally_ramified_values(f: MeromorphicPair, extra_candidates=()) -> list:
    """Totally ramified values among the detectable candidates: images of
    rational critical points, infinity, the omitted leading ratio, and
    any caller-supplied extras."""
    _require_exact(f, "total ramification search")
    fp = derivative_pair(f)
    if fp.num.is_zero():
        raise DerivativeVanishes("f' is identically zero")
    candidates = {INFINITY}
    roots, _ = ratpoly.rational_roots(to_poly(fp.num))
    den_poly = to_poly(f.den)
    num_poly = to_poly(f.num)
    for r, _m in roots:
        if ratpoly.evaluate(den_poly, r) != 0:
            candidates.add(ratpoly.evaluate(num_poly, r) / ratpoly.evaluate(den_poly, r))
    if ratpoly.degree(num_poly) == ratpoly.degree(den_poly):
        candidates.add(ratpoly.leading(num_poly) / ratpoly.leading(den_poly))
    candidates.update(Fraction(a) for a in extra_candidates if a != INFINITY)
    found = []
    for a in sorted(candidates, key=lambda x: (x == INFINITY, x)):
        g = apoint_series(f, a)
        if not g.is_zero() and totally_ramified(f, a):
            found.append(a)
    return found


def shares_value(f: MeromorphicPair, g: MeromorphicPair, a) -> bool:
    """Set equality of a-points in the affine line, ignoring multiplicity:
    the monic radicals of the two a-point polynomials must agree."""
    _require_exact(f, "value sharing")
    _require_exact(g, "value sharing")
    pf = to_poly(apoint_series(f, a))
    pg = to_poly(apoint_series(g, a))
    if not pf or not pg:
        raise ZeroSeries(f"one side is identically {a}")
    if ratpoly.degree(pf) < 1 or ratpoly.degree(pg) < 1:
        return ratpoly.degree(pf) < 1 and ratpoly.degree(pg) < 1
    return ratpoly.radical(pf) == ratpoly.radical(pg)


def pair_hasse(f: MeromorphicPair, n: int) -> MeromorphicPair:
    """n-th Hasse derivative of a quotient.

    From num = f * den and the product rule, with D^m f = W_m / den^(m+1):

        W_m = D^m(num) * den^m - sum_(j=1..m) W_(m-j) * D^j(den) * den^(j-1).
    """
    if n == 0:
        return f
    g, h = f.num, f.den
    hpow = [laurent(h.p, {0: Fraction(1)})]
    for _ in range(n + 1):
        hpow.append(hpow[-1] * h)
    W = [g]
    for m in range(1, n + 1):
        acc = hasse_derivative(g, m) * hpow[m]
        for j in range(1, m + 1):
            acc = acc - W[m - j] * hasse_derivative(h, j) * hpow[j - 1]
        W.append(acc)
    if f.is_exact_rational():
        return rational_pair(W[n], hpow[n + 1])
    return MeromorphicPair(W[n], hpow[n + 1], False)


@dataclass(frozen=True)
class NevanlinnaReport:
    """Per-target value-distribution records plus the SMT slack."""

    targets: tuple
    records: tuple  # per target: dict with m, N, N1, T, delta, theta
    ram: Optional[PiecewiseLinear]
    smt: Optional[SmtReport]


def nevanlinna_report(f: MeromorphicPair, targets) -> NevanlinnaReport:
    _require_exact(f, "report")
    records = []
    defs = defects(f, targets)
    for (a, delta, theta) in defs:
        records.append(
            {
                "target": a,
                "m": prox_m(f, a),
                "N": count_N(f, a),
                "N1": count_N1(f, a),
                "T": charT(f, a),
                "delta": delta,
                "theta": theta,
            }
        )
    ram = None
    smt = None
    try:
        ram = n_ram(f)
    except DerivativeVanishes:
        pass
    if len(targets) >= 3 and ram is not None:
        smt = smt_report(f, targets)
    return NevanlinnaReport(tuple(targets), tuple(records), ram, smt)
