"""Truncated Laurent series with certified tails.

A :class:`LaurentApprox` stores finitely many exact rational
coefficients.  Within the window ``[n_lo, n_hi]`` the coefficients are
exactly the stored ones (unstored exponents there are exactly zero),
and below ``n_lo`` everything is exactly zero.  Above ``n_hi`` either

* ``exact`` is true and everything is zero (a Laurent polynomial), or
* an affine tail bound ``(alpha, beta)`` certifies
  ``vp(c_n) >= alpha + beta*n`` for every unstored ``n > n_hi``, which
  makes the series converge at every log-radius ``rho < beta``, or
* nothing is known above the window (``tail_bound`` is None), in which
  case evaluation and polygon queries refuse to certify anything.

Values whose true expansions have infinitely many *negative* exponents
(unit inverses on large circles, circle expansions of rational
functions) are handed out as exact truncations whose residual norm the
caller can certify separately; the type deliberately has no low-side
tail, so "exactly zero below n_lo" is a hard invariant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import (
    DuplicatePoint,
    EmptyWindow,
    OutsideRadius,
    Uncertifiable,
    ZeroPoint,
)
from .valued_field import INF, NEG_INF, abs_log, binomial, check_prime, vp

Tail = tuple  # (alpha, beta): vp(c_n) >= alpha + beta*n for n > n_hi


@dataclass(frozen=True, eq=False)
class LaurentApprox:
    """A Laurent series known exactly on a window, with a certified tail."""

    p: int
    coeffs: dict  # exponent -> nonzero Fraction
    window: tuple  # (n_lo, n_hi); empty support uses (0, -1)
    tail_bound: Optional[Tail] = None
    exact: bool = True

    def __post_init__(self):
        check_prime(self.p)
        for n, c in self.coeffs.items():
            if c == 0:
                raise ValueError(f"stored coefficient at {n} is zero")
            if not (self.window[0] <= n <= self.window[1]):
                raise ValueError(f"exponent {n} outside window {self.window}")
        if self.exact and self.tail_bound is not None:
            raise ValueError("exact series carries no tail bound")

    # -- basic views -------------------------------------------------------

    def support(self) -> list:
        return sorted(self.coeffs)

    def coeff(self, n: int) -> Fraction:
        """Coefficient at a certified exponent (zero within the window)."""
        if n in self.coeffs:
            return self.coeffs[n]
        if n <= self.window[1] or self.exact:
            return Fraction(0)
        raise Uncertifiable(f"coefficient at {n} is beyond the window")

    def is_zero(self) -> bool:
        return self.exact and not self.coeffs

    def order(self) -> int:
        """Smallest exponent with a nonzero coefficient."""
        if not self.coeffs:
            raise ValueError("zero (or blank) series has no order")
        return min(self.coeffs)

    def top_degree(self) -> int:
        if not self.exact:
            raise ValueError("truncated series has no top degree")
        if not self.coeffs:
            raise ValueError("zero series has no degree")
        return max(self.coeffs)

    def min_mass(self):
        """Smallest exponent that can carry a nonzero coefficient."""
        if self.coeffs:
            return min(self.coeffs)
        return INF if self.exact else self.window[1] + 1

    def __eq__(self, other):
        if not isinstance(other, LaurentApprox):
            return NotImplemented
        return (
            self.p == other.p
            and self.exact == other.exact
            and self.coeffs == other.coeffs
            and (self.exact or (self.window == other.window and self.tail_bound == other.tail_bound))
        )

    def __repr__(self):
        terms = " + ".join(f"({c})z^{n}" for n, c in sorted(self.coeffs.items())) or "0"
        mark = "" if self.exact else f" +tail{self.tail_bound} on n>{self.window[1]}"
        return f"<Laurent p={self.p}: {terms}{mark}>"

    # -- arithmetic sugar ---------------------------------------------------

    def __add__(self, other):
        return add(self, _coerce(other, self.p))

    def __radd__(self, other):
        return add(_coerce(other, self.p), self)

    def __sub__(self, other):
        return add(self, scalar_mul(_coerce(other, self.p), -1))

    def __rsub__(self, other):
        return add(_coerce(other, self.p), scalar_mul(self, -1))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scalar_mul(self, other)
        return mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __neg__(self):
        return scalar_mul(self, -1)


def _coerce(x, p) -> LaurentApprox:
    if isinstance(x, LaurentApprox):
        return x
    return constant(p, x)


# -- constructors -----------------------------------------------------------


def laurent(p, coeffs, tail_bound=None, window=None, exact=None) -> LaurentApprox:
    """Build a series from an exponent -> rational mapping."""
    clean = {int(n): Fraction(c) for n, c in dict(coeffs).items() if Fraction(c) != 0}
    if exact is None:
        exact = tail_bound is None
    if window is None:
        window = (min(clean), max(clean)) if clean else (0, -1)
    if tail_bound is not None:
        tail_bound = (Fraction(tail_bound[0]), Fraction(tail_bound[1]))
    return LaurentApprox(p, clean, tuple(window), tail_bound, exact)


def from_pairs(p, pairs, tail_bound=None, window=None, exact=None) -> LaurentApprox:
    """Series literal: list of [exponent, "rational"] pairs."""
    return laurent(p, {int(n): Fraction(str(c)) for n, c in pairs}, tail_bound, window, exact)


def poly_series(p, coefficients) -> LaurentApprox:
    """Exact polynomial from a dense coefficient list (index = exponent)."""
    return laurent(p, dict(enumerate(Fraction(c) for c in coefficients)))


def constant(p, c) -> LaurentApprox:
    return laurent(p, {0: Fraction(c)})


def monomial(p, n, c=1) -> LaurentApprox:
    return laurent(p, {n: Fraction(c)})


def zero_series(p) -> LaurentApprox:
    return laurent(p, {})


def to_poly(f: LaurentApprox) -> list:
    """Dense coefficient list of an exact series with n_lo >= 0."""
    if not f.exact:
        raise ValueError("not exact")
    if f.coeffs and min(f.coeffs) < 0:
        raise ValueError("negative exponents present")
    out = [Fraction(0)] * ((max(f.coeffs) + 1) if f.coeffs else 0)
    for n, c in f.coeffs.items():
        out[n] = c
    return out


# -- affine tail machinery ---------------------------------------------------


def _affine_min(lines, n0):
    """Affine (a, b) under every given affine line for all n >= n0."""
    b = min(l[1] for l in lines)
    a = min(l[0] + l[1] * n0 for l in lines) - b * n0
    return (a, b)


def _affine_under_points(points, prefer_slope=None):
    """Affine (a, b) with a + b*n <= v for each (n, v); tight on the upper end.

    With no preferred slope, uses the steepest slope of the lower convex
    hull so the certified region extends as far right as possible.
    """
    pts = sorted(points)
    if prefer_slope is not None:
        b = Fraction(prefer_slope)
    elif len(pts) == 1:
        b = Fraction(0)
    else:
        b = max(
            Fraction(v2 - v1, n2 - n1)
            for (n1, v1), (n2, v2) in zip(pts, pts[1:])
        )
    a = min(v - b * n for n, v in pts)
    return (a, b)


def tail_minorant(f: LaurentApprox, n0: int, p: int):
    """Affine (a, b) with vp(c_n) >= a + b*n for ALL n > n0.

    Returns None when f is truncated without a tail bound (unknowable)
    and the string "vacuous" when f provably has no mass above n0.
    """
    pts = [(n, -abs_log(c, p)) for n, c in f.coeffs.items() if n > n0]
    lines = []
    if not f.exact:
        if f.tail_bound is None:
            return None
        # the ray covers n > f.window[1]; mass in (n0, f.window[1]] is
        # exactly the stored points collected above
        lines.append(f.tail_bound)
    if not pts and not lines:
        return "vacuous"
    if pts:
        # any line under the points works; match the ray slope when present
        slope = lines[0][1] if lines else None
        lines.append(_affine_under_points(pts, prefer_slope=slope))
    return _affine_min(lines, n0 + 1)


def _global_minorant(f: LaurentApprox, p: int, prefer_slope=None):
    """Affine (a, b) with vp(c_n) >= a + b*n for every exponent of f."""
    pts = [(n, -abs_log(c, p)) for n, c in f.coeffs.items()]
    lines = []
    if not f.exact:
        if f.tail_bound is None:
            return None
        lines.append(f.tail_bound)
        prefer_slope = f.tail_bound[1]
    if pts:
        lines.append(_affine_under_points(pts, prefer_slope=prefer_slope))
    if not lines:
        return (Fraction(0), Fraction(0) if prefer_slope is None else Fraction(prefer_slope))
    n_anchor = min(f.min_mass(), f.window[1] + 1) if f.coeffs or not f.exact else 0
    if n_anchor == INF:
        n_anchor = 0
    return _affine_min(lines, n_anchor)


# -- ring operations ---------------------------------------------------------


def add(f: LaurentApprox, g: LaurentApprox) -> LaurentApprox:
    """Coefficientwise sum on the intersection of reliability."""
    if f.p != g.p:
        raise ValueError("mixed primes")
    p = f.p
    if f.exact and g.exact:
        out = dict(f.coeffs)
        for n, c in g.coeffs.items():
            out[n] = out.get(n, Fraction(0)) + c
        return laurent(p, out)
    known_hi = min(h.window[1] for h in (f, g) if not h.exact)
    out = {}
    for n in set(f.coeffs) | set(g.coeffs):
        if n <= known_hi:
            out[n] = f.coeffs.get(n, Fraction(0)) + g.coeffs.get(n, Fraction(0))
    bounds = []
    for h in (f, g):
        b = tail_minorant(h, known_hi, p)
        if b is None:
            return laurent(p, out, window=(min(f.window[0], g.window[0]), known_hi), exact=False)
        if b != "vacuous":
            bounds.append(b)
    tail = _affine_min(bounds, known_hi + 1) if bounds else None
    exact = tail is None
    return laurent(
        p,
        out,
        tail_bound=tail,
        window=(min(f.window[0], g.window[0]), known_hi),
        exact=exact,
    )


def scalar_mul(f: LaurentApprox, c) -> LaurentApprox:
    c = Fraction(c)
    if c == 0:
        return zero_series(f.p)
    out = {n: c * a for n, a in f.coeffs.items()}
    tail = None
    if f.tail_bound is not None:
        a, b = f.tail_bound
        tail = (a + vp(c, f.p), b)
    return laurent(f.p, out, tail_bound=tail, window=f.window, exact=f.exact)


def shift(f: LaurentApprox, m: int) -> LaurentApprox:
    """Multiply by z^m."""
    if f.is_zero():
        return f
    out = {n + m: c for n, c in f.coeffs.items()}
    tail = None
    if f.tail_bound is not None:
        a, b = f.tail_bound
        tail = (a - b * m, b)
    return laurent(
        f.p, out, tail_bound=tail, window=(f.window[0] + m, f.window[1] + m), exact=f.exact
    )


def mul(f: LaurentApprox, g: LaurentApprox) -> LaurentApprox:
    """Cauchy product on the largest window where every coefficient is certain.

    The product of exact values is exact.  Otherwise a coefficient at m
    is fully determined only when no unknown tail exponent of one factor
    can pair with mass of the other, and the tail bound is propagated as
    a valid affine minorant of the convolved bounds.
    """
    if f.p != g.p:
        raise ValueError("mixed primes")
    p = f.p
    if f.is_zero() or g.is_zero():
        return zero_series(p)
    if f.exact and g.exact:
        out = {}
        for i, a in f.coeffs.items():
            for j, b in g.coeffs.items():
                n = i + j
                out[n] = out.get(n, Fraction(0)) + a * b
        return laurent(p, out)

    candidates = []
    if not f.exact:
        candidates.append(f.window[1] + g.min_mass())
    if not g.exact:
        candidates.append(g.window[1] + f.min_mass())
    known_hi = min(candidates)
    if known_hi == INF:  # a blank truncated factor against exact zero mass
        return zero_series(p)
    lo = f.min_mass() + g.min_mass()
    if known_hi < lo:
        raise EmptyWindow("no product coefficient is guaranteed correct")

    out = {}
    for i, a in f.coeffs.items():
        for j, b in g.coeffs.items():
            n = i + j
            if n <= known_hi:
                out[n] = out.get(n, Fraction(0)) + a * b

    vf = _global_minorant(f, p)
    vg = _global_minorant(g, p)
    tail = None
    if vf is not None and vg is not None:
        af, bf = vf
        ag, bg = vg
        f_lo, g_lo = f.min_mass(), g.min_mass()
        # min over i of Vf(i) + Vg(n - i) is attained at an endpoint
        l1 = (af + bf * f_lo + ag - bg * f_lo, bg)
        l2 = (ag + bg * g_lo + af - bf * g_lo, bf)
        tail = _affine_min([l1, l2], known_hi + 1)
    return laurent(
        p,
        out,
        tail_bound=tail,
        window=(min(lo, known_hi), known_hi),
        exact=False,
    )


def hasse_derivative(f: LaurentApprox, n: int) -> LaurentApprox:
    """n-th Hasse derivative: coefficient of z^(k-n) is binomial(k, n) * c_k.

    The exponent band [0, n-1] of the input contributes nothing.  Equals
    the n-th ordinary derivative divided by n! in characteristic zero.
    """
    if n < 0:
        raise ValueError("derivative order must be non-negative")
    if n == 0:
        return f
    out = {}
    for k, c in f.coeffs.items():
        b = binomial(k, n)
        if b:
            out[k - n] = b * c
    tail = None
    if f.tail_bound is not None:
        a, b = f.tail_bound
        tail = (a + b * n, b)
    window = (f.window[0] - n, f.window[1] - n)
    if f.exact:
        return laurent(f.p, out)
    return laurent(f.p, out, tail_bound=tail, window=window, exact=False)


def truncate_with_tail(f: LaurentApprox, hi: int) -> LaurentApprox:
    """Drop exponents above hi; for exact input the discarded coefficients
    supply a valid tail bound, so nothing certified is lost."""
    kept = {n: c for n, c in f.coeffs.items() if n <= hi}
    if f.exact:
        discarded = [(n, -abs_log(c, f.p)) for n, c in f.coeffs.items() if n > hi]
        if not discarded:
            return f
        tail = _affine_under_points(discarded)
        return laurent(f.p, kept, tail_bound=tail, window=(min(f.window[0], hi), hi), exact=False)
    if hi >= f.window[1]:
        return f
    tail = tail_minorant(f, hi, f.p)
    if tail in (None, "vacuous"):
        tail = None
    return laurent(
        f.p,
        kept,
        tail_bound=tail,
        window=(min(f.window[0], hi), hi),
        exact=False,
    )


# -- analytic operations ------------------------------------------------------


class Evaluation(NamedTuple):
    value: Fraction
    error_valuation_floor: object  # Fraction or INF


def evaluate(f: LaurentApprox, z) -> Evaluation:
    """Partial sum over the stored window plus a certified error floor.

    The floor is the least possible valuation of the omitted tail:
    min over unstored n > n_hi of (alpha + beta*n - n*rho_z).  Exact
    input gives floor +infinity.
    """
    z = Fraction(z)
    rho_z = abs_log(z, f.p)
    if z == 0 and f.min_mass() != INF and f.min_mass() < 0:
        raise OutsideRadius("pole at the origin")
    value = Fraction(0)
    for n, c in f.coeffs.items():
        value += c * z ** n
    if f.exact:
        return Evaluation(value, INF)
    if f.tail_bound is None:
        raise Uncertifiable("no tail bound on a truncated series")
    a, b = f.tail_bound
    if z == 0:
        return Evaluation(value, INF if f.window[1] >= 0 else a + b * (f.window[1] + 1))
    if rho_z >= b:
        raise OutsideRadius(f"log-radius {rho_z} is not below the certified bound {b}")
    n1 = f.window[1] + 1
    return Evaluation(value, a + b * n1 - n1 * rho_z)


def recenter(f: LaurentApprox, b, order: int) -> LaurentApprox:
    """Re-expand a power series around b: coefficient n is D^n f(b).

    Requires n_lo >= 0 and, for truncated input, |b| strictly inside the
    certified convergence bound.  Truncation error floors for the
    truncated case come from :func:`recenter_error_floor`.
    """
    b = Fraction(b)
    if f.coeffs and min(f.coeffs) < 0:
        raise ValueError("recentering needs a power series")
    if b == 0:
        return f if (f.exact or order >= f.window[1]) else truncate_with_tail(f, order)
    if not f.exact:
        if f.tail_bound is None:
            raise Uncertifiable("no tail bound on a truncated series")
        if abs_log(b, f.p) >= f.tail_bound[1]:
            raise OutsideRadius("recentering point outside the certified radius")
    top = f.window[1] if not f.exact else (f.top_degree() if f.coeffs else 0)
    full_order = top if f.exact else min(order, top)
    out = {}
    for n in range(0, full_order + 1):
        coeff = Fraction(0)
        for k, c in f.coeffs.items():
            if k >= n:
                coeff += binomial(k, n) * c * b ** (k - n)
        if coeff:
            out[n] = coeff
    if f.exact:
        g = laurent(f.p, out)
        return g if order >= top else truncate_with_tail(g, order)
    vb = vp(b, f.p)
    a_t, b_t = f.tail_bound
    base = min(
        min((-abs_log(c, f.p)) + k * vb for k, c in f.coeffs.items()),
        a_t + (b_t + vb) * (f.window[1] + 1),
    )
    return laurent(f.p, out, tail_bound=(base, -vb), window=(0, order), exact=False)


def recenter_error_floor(f: LaurentApprox, b, n: int):
    """Valuation floor on the truncation error of coefficient n of
    recenter(f, b, .): min over omitted k of vp(binom(k,n) c_k b^(k-n))."""
    if f.exact:
        return INF
    if f.tail_bound is None:
        raise Uncertifiable("no tail bound on a truncated series")
    a, bb = f.tail_bound
    vb = vp(b, f.p)
    k1 = f.window[1] + 1
    if vb == INF:
        return a + bb * n if n > f.window[1] else INF
    return a + (bb + vb) * k1 - n * vb


def product_from_zeros(p, zeros, m0: int = 0, order: Optional[int] = None) -> LaurentApprox:
    """z^m0 * prod (1 - z/z_i)^(m_i), truncated to degree <= order.

    Points must be nonzero and pairwise distinct; the origin's
    multiplicity travels through m0.  A finite prescription is computed
    exactly; when order cuts it off, the discarded coefficients are
    converted into a certified tail bound.
    """
    check_prime(p)
    if m0 < 0:
        raise ValueError("m0 must be non-negative")
    seen = set()
    out = laurent(p, {0: Fraction(1)})
    for point, m in zeros:
        point = Fraction(point)
        if point == 0:
            raise ZeroPoint("prescribe the origin through m0")
        if m < 1:
            raise ValueError("multiplicities must be positive")
        if point in seen:
            raise DuplicatePoint(f"{point} listed twice")
        seen.add(point)
        factor = laurent(p, {0: Fraction(1), 1: -1 / point})
        for _ in range(m):
            out = mul(out, factor)
    out = shift(out, m0)
    if order is not None and out.coeffs and max(out.coeffs) > order:
        out = truncate_with_tail(out, order)
    return out


class Stabilization(NamedTuple):
    stabilizes: bool
    index: Optional[int]  # first factor with |1 - f_n| < 1 at rho


def partial_product_stabilizes(factors, rho) -> Stabilization:
    """Finite-stabilization test for infinite products at log-radius rho.

    True when |1 - f_n|_rho is strictly decreasing along the list and
    ends below 1; over an incomplete coefficient field only this finite
    direction of the convergence criterion is testable.
    """
    from .polygon import sup_log

    prev = None
    index = None
    for i, fac in enumerate(factors):
        s = sup_log(fac - 1, rho)
        if index is None and s < 0:
            index = i
        if prev is not None and not (s < prev):
            return Stabilization(False, index)
        prev = s
    if prev is None:
        return Stabilization(True, None)
    return Stabilization(prev < 0, index)
