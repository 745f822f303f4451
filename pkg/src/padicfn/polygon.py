"""The valuation-polygon engine.

For a series with coefficients c_n put l_n = log_p |c_n| = -vp(c_n).
The log-norm at log-radius rho is the support function

    sup_log(f, rho) = max_n (l_n + n * rho),

a convex piecewise-linear function of rho whose slopes are the extreme
attaining exponents k(f, rho) <= K(f, rho) and whose corners are the
critical radii.  A corner of jump delta certifies exactly delta zeros
of that absolute value in an algebraic closure; no attempt is made to
locate zeros beyond their valuations.

Truncated series are served only on their reliable window, the rho
interval where the stored coefficients provably dominate the affine
tail bound.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import ConstantSeries, OutsideReliableWindow, ZeroSeries
from .series import LaurentApprox
from .valued_field import INF, NEG_INF, abs_log, is_finite


# -- exact piecewise-linear functions ----------------------------------------


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous piecewise-linear function with exact rational data.

    ``slopes`` has one more entry than ``breaks``; the function is
    anchored by its value at ``anchor`` and extended along the slopes.
    The domain is the interval (lo, hi) with closed finite endpoints.
    """

    anchor: Fraction
    anchor_value: Fraction
    breaks: tuple
    slopes: tuple
    lo: object = NEG_INF
    hi: object = INF

    def __post_init__(self):
        if len(self.slopes) != len(self.breaks) + 1:
            raise ValueError("need len(slopes) == len(breaks) + 1")
        if any(b2 <= b1 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if not (self.lo <= self.anchor <= self.hi):
            raise ValueError("anchor outside domain")

    def __call__(self, rho) -> Fraction:
        rho = Fraction(rho)
        if not (self.lo <= rho <= self.hi):
            raise ValueError(f"{rho} outside domain [{self.lo}, {self.hi}]")
        a, b = sorted((self.anchor, rho))
        cuts = [a] + [x for x in self.breaks if a < x < b] + [b]
        total = Fraction(0)
        for x1, x2 in zip(cuts, cuts[1:]):
            total += self._slope_at((x1 + x2) / 2) * (x2 - x1)
        return self.anchor_value + (total if rho >= self.anchor else -total)

    def _slope_at(self, x) -> Fraction:
        return self.slopes[bisect_right(self.breaks, x)]

    def _rep(self, x1, x2) -> Fraction:
        """A finite point strictly inside the segment (x1, x2)."""
        if is_finite(x1) and is_finite(x2):
            return (Fraction(x1) + Fraction(x2)) / 2
        if is_finite(x1):
            return Fraction(x1) + 1
        if is_finite(x2):
            return Fraction(x2) - 1
        return Fraction(0)

    def _segments(self):
        pts = [self.lo] + list(self.breaks) + [self.hi]
        return list(zip(pts, pts[1:]))

    # -- arithmetic ---------------------------------------------------------

    def _combine(self, other, op):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            raise ValueError("disjoint domains")
        breaks = sorted({b for b in set(self.breaks) | set(other.breaks) if lo < b < hi})
        anchor = Fraction(lo) if is_finite(lo) else (Fraction(hi) if is_finite(hi) else Fraction(0))
        slopes = []
        pts = [lo] + breaks + [hi]
        for x1, x2 in zip(pts, pts[1:]):
            r = self._rep(x1, x2)
            slopes.append(op(self._slope_at(r), other._slope_at(r)))
        value = op(self(anchor), other(anchor))
        return make_pl(anchor, value, breaks, slopes, lo, hi)

    def __add__(self, other):
        other = _as_pl(other, self)
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        other = _as_pl(other, self)
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "PiecewiseLinear":
        c = Fraction(c)
        return make_pl(
            self.anchor,
            c * self.anchor_value,
            self.breaks,
            [c * s for s in self.slopes],
            self.lo,
            self.hi,
        )

    def shift_value(self, c) -> "PiecewiseLinear":
        return make_pl(
            self.anchor, self.anchor_value + Fraction(c), self.breaks, self.slopes, self.lo, self.hi
        )

    def max_with(self, other) -> "PiecewiseLinear":
        """Pointwise maximum; inserts crossing breakpoints exactly."""
        other = _as_pl(other, self)
        diff = self - other
        lo, hi = diff.lo, diff.hi
        crossings = []
        for x1, x2 in diff._segments():
            r = diff._rep(x1, x2)
            s = diff._slope_at(r)
            v = diff(r)
            if s != 0:
                x = r - v / s  # root of the affine piece
                if (x1 < x < x2) and is_finite(x):
                    crossings.append(Fraction(x))
        breaks = sorted(
            {b for b in set(self.breaks) | set(other.breaks) | set(crossings) if lo < b < hi}
        )
        anchor = Fraction(lo) if is_finite(lo) else (Fraction(hi) if is_finite(hi) else Fraction(0))
        pts = [lo] + breaks + [hi]
        slopes = []
        for x1, x2 in zip(pts, pts[1:]):
            r = self._rep(x1, x2)
            use_self = self(r) >= other(r)
            slopes.append(self._slope_at(r) if use_self else other._slope_at(r))
        value = max(self(anchor), other(anchor))
        return make_pl(anchor, value, breaks, slopes, lo, hi)

    def log_plus(self) -> "PiecewiseLinear":
        """max(0, .) of this function."""
        return self.max_with(constant_pl(0, self.lo, self.hi))

    # -- global data ---------------------------------------------------------

    def asymptotic_slope(self) -> Fraction:
        return self.slopes[-1]

    def initial_slope(self) -> Fraction:
        return self.slopes[0]

    def sup(self, lo=None, hi=None):
        """Exact supremum over [lo, hi] intersected with the domain."""
        lo = self.lo if lo is None else max(self.lo, lo)
        hi = self.hi if hi is None else min(self.hi, hi)
        if lo > hi:
            raise ValueError("empty range")
        if (not is_finite(lo) and self.initial_slope() < 0) or (
            not is_finite(hi) and self.asymptotic_slope() > 0
        ):
            return INF
        candidates = [Fraction(x) for x in [lo, hi] if is_finite(x)]
        candidates += [b for b in self.breaks if lo < b < hi]
        if not candidates:
            candidates = [self.anchor]
        return max(self(x) for x in candidates)

    def is_zero(self) -> bool:
        return self.anchor_value == 0 and all(s == 0 for s in self.slopes)

    def equals(self, other) -> bool:
        d = self - _as_pl(other, self)
        return d.is_zero()

    def breakpoints(self) -> list:
        """(rho, value) pairs at the breakpoints and finite domain ends."""
        xs = [Fraction(x) for x in [self.lo] if is_finite(self.lo)]
        xs += list(self.breaks)
        if is_finite(self.hi):
            xs.append(Fraction(self.hi))
        if not xs:
            xs = [self.anchor]
        return [(x, self(x)) for x in sorted(set(xs))]


def make_pl(anchor, value, breaks, slopes, lo=NEG_INF, hi=INF) -> PiecewiseLinear:
    """Normalized constructor: merges segments with equal slopes."""
    breaks = [Fraction(b) for b in breaks]
    slopes = [Fraction(s) for s in slopes]
    nb, ns = [], [slopes[0]]
    for b, s in zip(breaks, slopes[1:]):
        if s == ns[-1]:
            continue
        nb.append(b)
        ns.append(s)
    return PiecewiseLinear(Fraction(anchor), Fraction(value), tuple(nb), tuple(ns), lo, hi)


def constant_pl(c, lo=NEG_INF, hi=INF) -> PiecewiseLinear:
    anchor = Fraction(lo) if is_finite(lo) else (Fraction(hi) if is_finite(hi) else Fraction(0))
    return make_pl(anchor, Fraction(c), [], [Fraction(0)], lo, hi)


def _as_pl(x, like: PiecewiseLinear) -> PiecewiseLinear:
    if isinstance(x, PiecewiseLinear):
        return x
    return constant_pl(Fraction(x), like.lo, like.hi)


def linear_pl(slope, intercept=0, lo=NEG_INF, hi=INF) -> PiecewiseLinear:
    anchor = Fraction(lo) if is_finite(lo) else (Fraction(hi) if is_finite(hi) else Fraction(0))
    return make_pl(anchor, Fraction(slope) * anchor + Fraction(intercept), [], [slope], lo, hi)


# -- polygon data -------------------------------------------------------------


@dataclass(frozen=True)
class CriticalRadius:
    rho: Fraction
    delta: int  # K(f, rho) - k(f, rho) >= 1


@dataclass(frozen=True)
class NewtonPolygon:
    """Upper concave envelope of the points (n, l_n), with its corner data."""

    hull: tuple  # vertices (n, l_n), n strictly increasing, slopes decreasing
    critical: tuple  # CriticalRadius, strictly increasing in rho
    valid_window: tuple  # (lo, hi) log-radius interval the hull is certified on

    def to_json(self):
        return {
            "hull": [[n, str(l)] for n, l in self.hull],
            "critical_radii": [[str(c.rho), c.delta] for c in self.critical],
            "valid_window": [_fmt_bound(self.valid_window[0]), _fmt_bound(self.valid_window[1])],
        }


def _fmt_bound(x):
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return str(Fraction(x))


def _points(f: LaurentApprox):
    return sorted((n, abs_log(c, f.p)) for n, c in f.coeffs.items())


def _upper_hull(points):
    """Monotone chain; collinear middle points are dropped from the vertex
    list (extreme attaining indices are recovered from the coefficients)."""
    hull = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x2) <= (pt[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return hull


def reliable_window(f: LaurentApprox) -> tuple:
    """Maximal open rho-interval on which the stored window provably
    dominates the affine tail; (-inf, +inf) for exact values, an empty
    interval when nothing is certified."""
    if f.exact:
        return (NEG_INF, INF)
    if f.tail_bound is None or not f.coeffs:
        return (NEG_INF, NEG_INF)
    alpha, beta = f.tail_bound
    n1 = f.window[1] + 1
    s = _sup_pl_raw(f)
    # first tail term's log line: -alpha + n1*(rho - beta); every slope of
    # s - t is a stored exponent minus n1, hence negative, so the
    # difference decreases strictly from +inf to -inf and has one root
    t = linear_pl(n1, -alpha - n1 * beta)
    d = s - t
    pts = [NEG_INF] + list(d.breaks) + [INF]
    hi = NEG_INF
    for x1, x2 in zip(pts, pts[1:]):
        if is_finite(x2) and d(Fraction(x2)) > 0:
            continue
        r = d._rep(x1, x2)
        hi = r - d(r) / d._slope_at(r)
        break
    return (NEG_INF, min(hi, beta))


def _certify(f: LaurentApprox, rho):
    rho = Fraction(rho)
    if f.exact:
        return rho
    lo, hi = reliable_window(f)
    if not (lo < rho < hi):
        raise OutsideReliableWindow(f"rho = {rho} not inside {lo, hi}")
    return rho


def sup_log(f: LaurentApprox, rho):
    """log_p |f|_r at rho = log_p r: max over n of (l_n + n*rho).

    Returns -infinity for the zero series.
    """
    if f.is_zero():
        return NEG_INF
    rho = _certify(f, rho)
    return max(l + n * rho for n, l in _points(f))


def _sup_pl_raw(f: LaurentApprox) -> PiecewiseLinear:
    """Support function of the stored points on the full line."""
    hull = _upper_hull(_points(f))
    ns = [n for n, _ in hull]
    if len(hull) == 1:
        n, l = hull[0]
        return linear_pl(n, l)
    radii = []
    for (n1, l1), (n2, l2) in zip(hull, hull[1:]):
        radii.append(Fraction(l1 - l2, n2 - n1))
    anchor = radii[0]
    value = hull[0][1] + hull[0][0] * anchor
    return make_pl(anchor, value, radii, ns)


def sup_log_pl(f: LaurentApprox) -> PiecewiseLinear:
    """sup_log as an exact piecewise-linear function on the reliable window."""
    if f.is_zero():
        raise ZeroSeries("sup_log of the zero series is identically -infinity")
    s = _sup_pl_raw(f)
    lo, hi = reliable_window(f)
    if lo >= hi:
        raise OutsideReliableWindow("no certified window")
    breaks = [b for b in s.breaks if lo < b < hi]
    anchor = Fraction(hi) - 1 if is_finite(hi) else Fraction(0)
    pts = [lo] + breaks + [hi]
    slopes = [s._slope_at(s._rep(x1, x2)) for x1, x2 in zip(pts, pts[1:])]
    return make_pl(anchor, s(anchor), breaks, slopes, lo, hi)


def indices(f: LaurentApprox, rho) -> tuple:
    """(k, K): smallest and largest exponents attaining sup_log at rho.

    At rho = -infinity the radius-zero convention applies: k = 0 and K
    is the order of vanishing.
    """
    if f.is_zero():
        raise ZeroSeries("indices of the zero series are undefined")
    if rho == NEG_INF:
        return (0, f.order())
    rho = _certify(f, rho)
    pts = _points(f)
    best = max(l + n * rho for n, l in pts)
    attain = [n for n, l in pts if l + n * rho == best]
    return (min(attain), max(attain))


def newton_polygon(f: LaurentApprox) -> NewtonPolygon:
    if f.is_zero():
        return NewtonPolygon((), (), reliable_window(f))
    hull = _upper_hull(_points(f))
    critical = []
    for (n1, l1), (n2, l2) in zip(hull, hull[1:]):
        critical.append(CriticalRadius(Fraction(l1 - l2, n2 - n1), n2 - n1))
    return NewtonPolygon(tuple(hull), tuple(critical), reliable_window(f))


def critical_radii(f: LaurentApprox, window: Optional[tuple] = None) -> list:
    """The radii with K > k inside the window, with their slope jumps."""
    rel = reliable_window(f)
    if window is None:
        window = rel
    lo, hi = window
    if not (rel[0] <= lo and hi <= rel[1]):
        raise OutsideReliableWindow(f"window {window} exceeds certified {rel}")
    return [c for c in newton_polygon(f).critical if lo <= c.rho <= hi]


def count_zeros(f: LaurentApprox, rho1, rho2) -> int:
    """Number of zeros (with multiplicity, in an algebraic closure) with
    log-radius in [rho1, rho2]: K(f, rho2) - k(f, rho1)."""
    if rho1 != NEG_INF and rho2 != NEG_INF and Fraction(rho1) > Fraction(rho2):
        raise ValueError("need rho1 <= rho2")
    k1 = indices(f, rho1)[0] if rho1 != NEG_INF else 0
    K2 = indices(f, rho2)[1]
    return K2 - k1


def counting_N(f: LaurentApprox, rho_min=NEG_INF) -> PiecewiseLinear:
    """Logarithmically weighted zero count from corner data only.

    N(rho) = sum over critical rho_c in [rho_min, rho] of
    delta(rho_c) * (rho - rho_c), plus order(f) * rho when rho_min is
    -infinity (the radius-zero convention).  Independent of sup_log.
    """
    if f.is_zero():
        raise ZeroSeries("counting function of the zero series")
    rel = reliable_window(f)
    crit = newton_polygon(f).critical
    if rho_min == NEG_INF:
        if f.order() < 0:
            raise ValueError("counting from radius 0 needs a series analytic at 0")
        base = f.order()
        lo = NEG_INF
        radii = list(crit)
    else:
        rho_min = Fraction(rho_min)
        if not f.exact:
            _certify(f, rho_min)
        base = sum(c.delta for c in crit if c.rho == rho_min)
        lo = rho_min
        radii = [c for c in crit if c.rho > rho_min]
    hi = rel[1]
    radii = [c for c in radii if c.rho < hi]
    breaks = [c.rho for c in radii]
    slopes = [Fraction(base)]
    for c in radii:
        slopes.append(slopes[-1] + c.delta)
    if lo == NEG_INF:
        anchor = breaks[0] if breaks else (Fraction(0) if hi == INF else Fraction(hi) - 1)
        value = base * anchor
    else:
        anchor, value = Fraction(lo), Fraction(0)
    return make_pl(anchor, value, breaks, slopes, lo, hi)


def injectivity_log_radius(f: LaurentApprox):
    """Supremum (open) of log-radii rho with K(f - f(0), rho) = 1; the
    series is injective on every strictly smaller closed ball."""
    if f.coeffs and min(f.coeffs) < 0:
        raise ValueError("injectivity radius needs a power series")
    g = {n: c for n, c in f.coeffs.items() if n != 0}
    if not g:
        raise ConstantSeries("constant series has no injectivity radius")
    rel_hi = reliable_window(f)[1]
    if min(g) > 1:
        return NEG_INF
    pts = sorted((n, abs_log(c, f.p)) for n, c in g.items())
    hull = _upper_hull(pts)
    if len(hull) == 1:
        return rel_hi
    (n1, l1), (n2, l2) = hull[0], hull[1]
    first_critical = Fraction(l1 - l2, n2 - n1)
    return min(first_critical, rel_hi)


def covers_disc(f: LaurentApprox, b, rho) -> bool:
    """Whether the image of the closed ball of log-radius rho contains b:
    |b - f(0)| <= |f - f(0)|_rho forces a solution of f = b inside."""
    b = Fraction(b)
    f0 = f.coeff(0)
    g = f - f0
    if g.is_zero():
        return b == f0
    return abs_log(b - f0, f.p) <= sup_log(g, rho)
