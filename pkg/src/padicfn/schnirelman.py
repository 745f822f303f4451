"""Schnirelman/Cauchy integral calculus in closed form.

The discrete-circle integral of a Laurent series around its center is
the coefficient of (z-a)^(-1) of the expansion valid on the circle; the
root-of-unity averages that define it stabilize at finite n, and that
stabilization is verified numerically in Z/p^k by
:func:`schnirelman_sum`.  For rational functions the partial-fraction
split turns the integral into a residue sum over the poles strictly
inside the circle, and :func:`circle_coefficient` supplies any
coefficient of the circle-valid expansion exactly for cross-checking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import ratpoly
from .errors import (
    NotCoprime,
    OnCircle,
    OutsideRadius,
    PoleOnCircle,
    UnsplitDenominator,
)
from .series import LaurentApprox, evaluate, hasse_derivative, poly_series, to_poly
from .valued_field import (
    INF,
    PadicResidueInt,
    abs_log,
    binomial,
    reduce,
    teichmuller_roots,
    vp,
)


def _check_circle_convergence(f: LaurentApprox, rho):
    if f.exact:
        return
    if f.tail_bound is None or Fraction(rho) >= f.tail_bound[1]:
        raise OutsideRadius(f"series not certified on the circle at rho = {rho}")


def integral_series(f: LaurentApprox, a, rho) -> Fraction:
    """Integral over the discrete circle |z - a| = p^rho, in closed form.

    Equals the coefficient of (z-a)^(-1) of the expansion valid on the
    circle: zero for power series (Cauchy integral theorem), and the
    z^(-1) coefficient of f exactly when the origin pole lies strictly
    inside the circle.
    """
    rho = Fraction(rho)
    a = Fraction(a)
    _check_circle_convergence(f, rho)
    has_pole = not f.is_zero() and f.min_mass() != INF and f.min_mass() < 0
    if not has_pole:
        return Fraction(0)
    if a == 0:
        return f.coeff(-1)
    ra = abs_log(a, f.p)
    if ra == rho:
        raise OnCircle("the origin pole lies on the discrete circle")
    return f.coeff(-1) if ra < rho else Fraction(0)


def cauchy_coeff(f: LaurentApprox, w, n: int, rho) -> Fraction:
    """Integral of f(z)/(z - w)^(n+1) over |z| = p^rho for analytic f:
    the n-th Hasse derivative at w inside the circle, zero outside."""
    rho = Fraction(rho)
    w = Fraction(w)
    if f.coeffs and min(f.coeffs) < 0:
        raise ValueError("cauchy_coeff needs a series analytic on the ball")
    _check_circle_convergence(f, rho)
    rw = abs_log(w, f.p)
    if rw == rho:
        raise OnCircle(f"|w| = p^{rho} lies on the circle")
    if rw > rho:
        return Fraction(0)
    return evaluate(hasse_derivative(f, n), w).value


@dataclass(frozen=True)
class RationalFunctionSplit:
    """Exact partial-fraction data: analytic part plus principal parts.

    poles holds (b, m, (A_1, ..., A_m)) per pole, the coefficients of
    1/(z-b), ..., 1/(z-b)^m; A_1 is the residue at b.
    """

    analytic_part: LaurentApprox
    poles: tuple  # (b, order, coefficients A_1..A_m)

    def residue(self, b) -> Fraction:
        b = Fraction(b)
        for point, _m, coeffs in self.poles:
            if point == b:
                return coeffs[0]
        return Fraction(0)


def _taylor_quotient(num, den, order: int) -> list:
    """Power-series quotient num/den mod w^(order+1); den[0] != 0."""
    c = []
    for t in range(order + 1):
        acc = num[t] if t < len(num) else Fraction(0)
        for i, ci in enumerate(c):
            j = t - i
            if 0 <= j < len(den):
                acc -= ci * den[j]
        c.append(acc / den[0])
    return c


def partial_fractions(num: LaurentApprox, den: LaurentApprox) -> RationalFunctionSplit:
    """Exact decomposition num/den = g + sum A_(i,j)/(z - b_i)^j.

    The denominator must factor into rational linear factors (checked by
    rational root extraction) and be coprime to the numerator.  The
    reassembled parts reproduce the input exactly; this is verified
    before returning.
    """
    p = num.p
    a, b = to_poly(num), to_poly(den)
    if not b:
        raise ZeroDivisionError("zero denominator")
    if not ratpoly.coprime(a, b):
        raise NotCoprime("numerator and denominator share a factor")
    roots, cofactor = ratpoly.rational_roots(b)
    if ratpoly.degree(cofactor) > 0:
        raise UnsplitDenominator(f"irreducible cofactor of degree {ratpoly.degree(cofactor)}")
    lc = cofactor[0]
    g, rem = ratpoly.divmod_(a, b)
    poles = []
    for point, m in sorted(roots):
        q = ratpoly.divmod_(b, ratpoly.pow_([-point, Fraction(1)], m))[0]
        rem_b = ratpoly.shift_argument(rem, point)
        q_b = ratpoly.shift_argument(q, point)
        taylor = _taylor_quotient(rem_b, q_b, m - 1)
        coeffs = tuple(taylor[m - j] for j in range(1, m + 1))
        poles.append((point, m, coeffs))
    split = RationalFunctionSplit(poly_series(p, g), tuple(poles))
    _verify_reassembly(a, b, split)
    return split


def _verify_reassembly(num, den, split: RationalFunctionSplit):
    total = ratpoly.mul(to_poly(split.analytic_part), den)
    for point, m, coeffs in split.poles:
        for j, A in enumerate(coeffs, start=1):
            other = ratpoly.divmod_(den, ratpoly.pow_([-point, Fraction(1)], j))[0]
            total = ratpoly.add(total, ratpoly.scale(other, A))
    if total != num:
        raise ArithmeticError("partial fraction reassembly failed")


def residue_sum(R, a, rho) -> Fraction:
    """Sum of residues at the poles strictly inside |z - a| = p^rho.

    R is a (num, den) pair of exact polynomial series or an existing
    split.  Equals the circle integral of the expansion valid there.
    """
    rho = Fraction(rho)
    a = Fraction(a)
    split = R if isinstance(R, RationalFunctionSplit) else partial_fractions(*R)
    p = split.analytic_part.p
    total = Fraction(0)
    for point, _m, coeffs in split.poles:
        d = abs_log(point - a, p)
        if d == rho:
            raise PoleOnCircle(f"pole {point} lies on the circle")
        if d < rho:
            total += coeffs[0]
    return total


def circle_coefficient(R, a, rho, n: int) -> Fraction:
    """Exact coefficient of (z-a)^n of the Laurent expansion of a rational
    function valid on |z - a| = p^rho.

    Inside poles expand into negative powers, outside poles into
    non-negative powers, and the polynomial part recenters exactly; at
    n = -1 this reproduces the residue theorem coefficientwise.
    """
    rho = Fraction(rho)
    a = Fraction(a)
    split = R if isinstance(R, RationalFunctionSplit) else partial_fractions(*R)
    p = split.analytic_part.p
    total = Fraction(0)
    if n >= 0:
        g = ratpoly.shift_argument(to_poly(split.analytic_part), a)
        if n < len(g):
            total += g[n]
    for point, m, coeffs in split.poles:
        c = point - a
        d = abs_log(c, p)
        if d == rho:
            raise PoleOnCircle(f"pole {point} lies on the circle")
        for j, A in enumerate(coeffs, start=1):
            if d < rho:
                i = -n - j
                if i >= 0:
                    total += A * binomial(-j, i) * (-c) ** i
            elif n >= 0:
                total += A * binomial(-j, n) * (-1) ** n * (-c) ** (-j) * c ** (-n)
    return total


class SchnirelmanSum(NamedTuple):
    value: PadicResidueInt
    n_adequate: bool  # False flags possible aliasing (NTooSmall)


def schnirelman_sum(f: LaurentApprox, a, r, n: int, k: int) -> SchnirelmanSum:
    """The finite root-of-unity average (r/n) sum f(a + r xi) xi in Z/p^k.

    Roots of unity are Teichmueller lifts at working precision chosen so
    the lift error cannot reach p^k; the sum itself is evaluated in
    exact rational arithmetic and reduced at the end.  When n is too
    small against the exponent window the aliased value is still
    returned, flagged inadequate.
    """
    if not f.exact:
        raise ValueError("schnirelman_sum needs an exact Laurent polynomial")
    a = Fraction(a)
    r = Fraction(r)
    p = f.p
    n_lo = min(f.coeffs, default=0)
    n_hi = max(f.coeffs, default=0)
    adequate = n > max(abs(n_lo), n_hi) + 1
    max_ell = max((-vp(c, p) for c in f.coeffs.values()), default=0)
    v_r = vp(r, p) if r != 0 else 0
    v_pts_floor = min(0, vp(a, p) if a != 0 else 0, v_r)
    K = k + max(0, max_ell) + max(0, -v_r) + max(0, -(max(n_hi, 1) - 1) * min(0, v_pts_floor)) + 1
    roots = teichmuller_roots(p, n, K)
    total = Fraction(0)
    for xi in roots:
        x = a + r * xi.residue
        if n_lo < 0 and vp(x, p) != 0:
            raise PoleOnCircle(f"evaluation point {x} meets the origin pole")
        total += evaluate(f, x).value * xi.residue
    total *= Fraction(r, n)
    return SchnirelmanSum(reduce(total, p, k), adequate)
