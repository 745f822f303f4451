"""Exact p-adic valuation arithmetic on rationals.

All absolute values live on the log_p scale: for nonzero rational x,
``abs_log(x, p) = -vp(x, p)`` is log_p |x|_p, an exact integer.  The
valuation of 0 is +infinity and its log-absolute-value is -infinity;
both are represented by the float infinities, which order correctly
against Fractions and never mix into finite arithmetic.

Residues mod p^k are carried by :class:`PadicResidueInt`, which is what
Teichmueller roots of unity and finite Schnirelman sums live in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NegativeValuation, NotPrime, RootsUnavailable

INF = float("inf")
NEG_INF = float("-inf")

Rational = Fraction  # finite values; INF / NEG_INF mark the zero element


def is_finite(x) -> bool:
    return x != INF and x != NEG_INF


def check_prime(p: int) -> int:
    """Validate p at configuration time; trial division is plenty here."""
    if not isinstance(p, int) or p < 2:
        raise NotPrime(f"{p!r} is not a prime")
    d = 2
    while d * d <= p:
        if p % d == 0:
            raise NotPrime(f"{p} = {d} * {p // d} is not a prime")
        d += 1
    return p


def parse_rational(text) -> Fraction:
    """Parse "a/b" or "a" (also accepts ints) into an exact Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    return Fraction(str(text).strip())


def _int_vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x, p: int):
    """Exact exponent n with x = p^n * (a/b), p dividing neither a nor b.

    Returns +infinity for x = 0.  On the rationals the value is always
    an integer.
    """
    x = Fraction(x)
    if x == 0:
        return INF
    return _int_vp(x.numerator, p) - _int_vp(x.denominator, p)


def abs_log(x, p: int):
    """log_p |x|_p = -vp(x); -infinity for x = 0."""
    v = vp(x, p)
    return NEG_INF if v == INF else -v


@dataclass(frozen=True)
class PadicResidueInt:
    """An element of Z/p^k, the finite-precision shadow of a p-adic integer."""

    p: int
    modulus_exponent: int
    residue: int

    def __post_init__(self):
        if self.modulus_exponent < 1:
            raise ValueError("modulus exponent must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus())

    def modulus(self) -> int:
        return self.p ** self.modulus_exponent

    def _coerce(self, other) -> int:
        if isinstance(other, PadicResidueInt):
            if other.p != self.p or other.modulus_exponent != self.modulus_exponent:
                raise ValueError("mixed residue rings")
            return other.residue
        return int(other)

    def __add__(self, other):
        return PadicResidueInt(self.p, self.modulus_exponent, self.residue + self._coerce(other))

    def __sub__(self, other):
        return PadicResidueInt(self.p, self.modulus_exponent, self.residue - self._coerce(other))

    def __mul__(self, other):
        return PadicResidueInt(self.p, self.modulus_exponent, self.residue * self._coerce(other))

    def __pow__(self, e: int):
        if e < 0:
            base = pow(self.residue, -1, self.modulus())
            return PadicResidueInt(self.p, self.modulus_exponent, pow(base, -e, self.modulus()))
        return PadicResidueInt(self.p, self.modulus_exponent, pow(self.residue, e, self.modulus()))

    def reduce_to(self, j: int) -> "PadicResidueInt":
        """Ring map Z/p^k -> Z/p^j for j <= k."""
        if j > self.modulus_exponent:
            raise ValueError("cannot lift precision")
        return PadicResidueInt(self.p, j, self.residue)

    def __int__(self) -> int:
        return self.residue


def reduce(x, p: int, k: int) -> PadicResidueInt:
    """Canonical residue of x mod p^k for x in the ring of integers.

    Raises NegativeValuation when vp(x) < 0; otherwise the lowest-terms
    denominator is automatically a unit mod p^k.
    """
    x = Fraction(x)
    v = vp(x, p)
    if v != INF and v < 0:
        raise NegativeValuation(f"vp({x}) = {v} < 0")
    m = p ** k
    num = x.numerator % m
    den_inv = pow(x.denominator % m, -1, m)
    return PadicResidueInt(p, k, num * den_inv)


def teichmuller_roots(p: int, n: int, k: int) -> list[PadicResidueInt]:
    """The n n-th roots of unity in Z_p, to precision p^k.

    Exists exactly when n divides p - 1 (all such roots are Teichmueller
    representatives).  Each mod-p root is lifted by Newton iteration
    x <- x - (x^n - 1)/(n x^(n-1)) with doubling modulus, so the output
    satisfies x^n = 1 mod p^k on the nose.  Ordered by mod-p residue.
    """
    check_prime(p)
    if n < 1 or (p - 1) % n != 0:
        raise RootsUnavailable(f"{n} does not divide p - 1 = {p - 1}")
    seeds = sorted(x for x in range(1, p) if pow(x, n, p) == 1)
    roots = []
    for x0 in seeds:
        x, prec = x0, 1
        while prec < k:
            prec = min(2 * prec, k)
            m = p ** prec
            fx = (pow(x, n, m) - 1) % m
            dfx = (n * pow(x, n - 1, m)) % m
            x = (x - fx * pow(dfx, -1, m)) % m
        roots.append(PadicResidueInt(p, k, x))
    return roots


def binomial(k: int, n: int) -> int:
    """Generalized binomial coefficient k(k-1)...(k-n+1) / n! for any integer k.

    Zero exactly on the band 0 <= k <= n-1; always an integer.
    """
    if n < 0:
        raise ValueError("lower index must be non-negative")
    if k >= n:
        return math.comb(k, n)
    if k >= 0:
        return 0
    return (-1) ** n * math.comb(n - k - 1, n)
