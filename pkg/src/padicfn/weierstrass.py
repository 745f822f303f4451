"""Euclidean division by dominant polynomials and Weierstrass preparation.

A polynomial P is dominant at rho when K(P, rho) = deg P (all its zeros
have log-radius <= rho) and extremal when additionally k(P, rho) = 0
(all zeros exactly on |z| = p^rho).  Division of a Laurent series by an
extremal polynomial splits into a power-series division and a
palindrome-transformed division of the principal part; the norm
contracts |R|_rho <= |f|_rho and |q|_rho <= |f|_rho / |P|_rho make the
division continuous in the dividend, which is exactly what powers the
preparation iteration P_(n+1) = P_n + R_n.

All computational entry points take exact inputs (Laurent polynomials);
for a truncated dividend, divide its stored window and obtain the norm
floors from :func:`division_error_floor`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from . import ratpoly
from .errors import (
    IncompatibleSlope,
    NeedExtremal,
    NoContraction,
    NotDominant,
    NotUnit,
    OutsideReliableWindow,
    ZeroSeries,
)
from .polygon import indices, reliable_window, sup_log
from .series import LaurentApprox, laurent, scalar_mul, shift, to_poly, zero_series
from .valued_field import INF, NEG_INF, vp


@dataclass(frozen=True)
class DominantPolynomial:
    """A polynomial certified dominant (optionally extremal) at a radius."""

    poly: LaurentApprox
    certified_rho: Fraction
    extremal: bool


def certify_dominant(P: LaurentApprox, rho) -> DominantPolynomial:
    """Re-checkable certificate that P is rho-dominant, flagging extremality."""
    rho = Fraction(rho)
    if not P.exact or P.is_zero():
        raise NotDominant("divisor must be a nonzero exact polynomial")
    if min(P.coeffs) < 0:
        raise NotDominant("divisor must have no negative exponents")
    k, K = indices(P, rho)
    if K != P.top_degree():
        raise NotDominant(f"K(P, {rho}) = {K} < deg P = {P.top_degree()}")
    return DominantPolynomial(P, rho, extremal=(k == 0))


class Division(NamedTuple):
    q: LaurentApprox
    R: LaurentApprox  # exact polynomial of degree < deg P


def _dense(f: LaurentApprox, lo: int = 0) -> list:
    out = [Fraction(0)] * (max(f.coeffs, default=lo - 1) - lo + 1)
    for n, c in f.coeffs.items():
        out[n - lo] = c
    return out


def divide(f: LaurentApprox, P, rho) -> Division:
    """f = P*q + R with deg R < deg P, exactly, for P dominant at rho.

    A dividend with negative exponents requires an extremal divisor;
    its principal part is divided through the palindrome transform
    z^(deg P) P(1/z).  The norm contracts |R|_rho <= |f|_rho and
    |q|_rho <= |f|_rho/|P|_rho are consequences, checked by the suites
    rather than assumed.
    """
    rho = Fraction(rho)
    cert = P if isinstance(P, DominantPolynomial) else certify_dominant(P, rho)
    if cert.certified_rho != rho:
        cert = certify_dominant(cert.poly, rho)
    P = cert.poly
    d = P.top_degree()
    p = f.p
    pos = {n: c for n, c in f.coeffs.items() if n >= 0}
    negs = {n: c for n, c in f.coeffs.items() if n < 0}
    if negs and not cert.extremal:
        raise NeedExtremal("Laurent dividend needs an extremal divisor")
    Pd = to_poly(P)
    q_pos, r_pos = ratpoly.divmod_(_dense(laurent(p, pos)), Pd)
    q_coeffs = {i: c for i, c in enumerate(q_pos) if c}
    r_coeffs = {i: c for i, c in enumerate(r_pos) if c}
    if negs:
        m = -min(negs)
        pal = list(reversed(Pd))  # z^d P(1/z)
        # h(z) = z^(d-1) f_-(1/z) has exponents d-1+1 .. d-1+m
        h = [Fraction(0)] * (d + m)
        for n, c in negs.items():
            h[d - 1 - n] = c
        q_neg, r_neg = ratpoly.divmod_(ratpoly.trim(h), pal)
        # f_- = P(z) * z^(-1) q_neg(1/z) + z^(d-1) r_neg(1/z)
        for i, c in enumerate(q_neg):
            if c:
                q_coeffs[-1 - i] = q_coeffs.get(-1 - i, Fraction(0)) + c
        for i, c in enumerate(r_neg):
            if c:
                j = d - 1 - i
                r_coeffs[j] = r_coeffs.get(j, Fraction(0)) + c
    return Division(laurent(p, q_coeffs), laurent(p, r_coeffs))


class DivisionFloors(NamedTuple):
    q_error_sup: object  # sup_log bound on the quotient error at rho
    r_error_sup: object  # sup_log bound on the remainder error at rho


def division_error_floor(f: LaurentApprox, P: LaurentApprox, rho) -> DivisionFloors:
    """Norm floors when the stored window of a truncated f is divided.

    Continuity of division turns the omitted-tail norm directly into
    output bounds: the remainder moves by at most |f_tail|_rho and the
    quotient by at most |f_tail|_rho / |P|_rho.
    """
    rho = Fraction(rho)
    if f.exact:
        return DivisionFloors(NEG_INF, NEG_INF)
    if f.tail_bound is None:
        raise OutsideReliableWindow("no tail bound on the dividend")
    a, b = f.tail_bound
    if rho >= b:
        raise OutsideReliableWindow(f"rho = {rho} not below convergence bound {b}")
    n1 = f.window[1] + 1
    tail_sup = -a + n1 * (rho - b)
    return DivisionFloors(tail_sup - sup_log(P, rho), tail_sup)


def invert_unit(u: LaurentApprox, rho, order: int) -> LaurentApprox:
    """Multiplicative inverse at rho, truncated to `order` geometric terms.

    Requires K(u, rho) = k(u, rho) = m; after shifting by z^(-m) the
    inverse is (1/c0) * sum_j (1 - u z^(-m)/c0)^j with each term's norm
    dropping by sup_log(1 - u z^(-m)/c0, rho) < 0, so the returned
    truncation satisfies sup_log(u * v - 1, rho) <= (order+1) * drop.
    """
    rho = Fraction(rho)
    if u.is_zero():
        raise NotUnit("zero series")
    k, K = indices(u, rho)
    if k != K:
        raise NotUnit(f"K = {K} != k = {k} at rho = {rho}")
    w = shift(u, -k)
    c0 = w.coeff(0)
    g = scalar_mul(w, -1 / c0) + 1  # 1 - w/c0
    if not g.is_zero() and sup_log(g, rho) >= 0:
        raise NotUnit("dominant term does not strictly dominate")
    acc = laurent(u.p, {0: Fraction(1)})
    power = laurent(u.p, {0: Fraction(1)})
    for _ in range(order):
        power = power * g
        if power.is_zero():
            break
        acc = acc + power
    return shift(scalar_mul(acc, 1 / c0), -k)


@dataclass(frozen=True)
class PreparationResult:
    """f = P * u at the working radius, with the residual's floor.

    P is the extremal factor (degree K - k, P(0) = 1, all zeros on
    |z| = p^rho); u is a unit there, truncated so that f - P*u has
    every coefficient valuation >= the achieved floor.
    """

    P: LaurentApprox
    u: LaurentApprox
    rho: Fraction
    degree: int
    achieved_floor: object  # min coefficient valuation of f - P*u (INF if exact)
    iterations: int
    residual_trace: tuple  # sup_log of each residual at rho


def _min_coeff_valuation(f: LaurentApprox):
    if f.is_zero():
        return INF
    return min(vp(c, f.p) for c in f.coeffs.values())


def extremal_polynomial(p: int, rho, d: int) -> LaurentApprox:
    """1 + p^(d*rho) z^d, the simplest degree-d extremal polynomial at rho.

    Exists over the rationals only when d*rho is an integer (the total
    slope displacement must land in the value group); otherwise the
    factor guaranteed over a complete algebraically closed field has no
    rational-coefficient descent and IncompatibleSlope is raised.
    """
    rho = Fraction(rho)
    if d < 1:
        raise ValueError("degree must be positive")
    disp = d * rho
    if disp.denominator != 1:
        raise IncompatibleSlope(f"d*rho = {disp} is not an integer")
    return laurent(p, {0: Fraction(1), d: Fraction(p) ** int(disp)})


def prepare(f: LaurentApprox, rho, target_floor) -> PreparationResult:
    """Weierstrass preparation by iterated division.

    Starting from the window [k, K] part of f, each round divides f by
    the current extremal candidate and feeds the remainder back:
    P_(n+1) = P_n + R_n.  The residual norm contracts by at least
    delta = sup_log(f - P_1, rho) - sup_log(f, rho) < 0 per round, and
    iteration stops once every residual coefficient valuation clears
    target_floor.
    """
    rho = Fraction(rho)
    if f.is_zero():
        raise ZeroSeries("cannot prepare the zero series")
    if not f.exact:
        lo, hi = reliable_window(f)
        if not (lo < rho < hi):
            raise OutsideReliableWindow(f"rho = {rho} not inside {lo, hi}")
        f = laurent(f.p, dict(f.coeffs))  # prepare the stored window exactly
    target_floor = Fraction(target_floor)
    p = f.p
    k, K = indices(f, rho)
    d = K - k
    if (d * rho).denominator != 1:
        raise IncompatibleSlope(f"slope displacement {d * rho} not integral")
    g = shift(f, -k)
    if d == 0:
        one = laurent(p, {0: Fraction(1)})
        return PreparationResult(one, f, rho, 0, INF, 0, ())
    P = laurent(p, {n: c for n, c in g.coeffs.items() if 0 <= n <= d})
    first_residual = g - P
    if first_residual.is_zero():
        c0 = P.coeff(0)
        Phat = scalar_mul(P, 1 / c0)
        u = shift(laurent(p, {0: c0}), k)
        return PreparationResult(Phat, u, rho, d, INF, 0, ())
    delta = sup_log(first_residual, rho) - sup_log(g, rho)
    if delta >= 0:
        raise NoContraction(f"per-step drop {delta} is not negative")
    trace = []
    # residual coefficients live on degrees < d: valuation floor needs
    # sup_log(R) <= min(0, (d-1)*rho) - target_floor + k-shift correction
    needed = min(Fraction(0), (d - 1) * rho) - target_floor
    max_iter = int((needed - sup_log(g, rho)) / delta) + 3
    q = None
    for it in range(1, max_iter + 1):
        q, R = divide(g, P, rho)
        trace.append(sup_log(R, rho))
        if _min_coeff_valuation(R) >= target_floor:
            residual = R
            break
        P = P + R
    else:
        raise NoContraction("iteration budget exhausted without reaching the floor")
    c0 = P.coeff(0)
    Phat = scalar_mul(P, 1 / c0)
    u = shift(scalar_mul(q, c0), k)
    # f - Phat*u = z^k * residual, so the floor is exact
    floor = _min_coeff_valuation(residual)
    return PreparationResult(Phat, u, rho, d, floor, it, tuple(trace))
