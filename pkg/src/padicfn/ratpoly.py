"""Dense univariate polynomial arithmetic over the rationals.

Polynomials are lists of Fractions indexed by exponent, normalized so
the last entry is nonzero ([] is the zero polynomial).  This is the
exact workhorse behind division, gcd-based coprimality and squarefree
structure, rational root extraction, and partial fractions; everything
downstream of it must stay in Fraction arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

Poly = list  # list[Fraction]


def trim(cs) -> Poly:
    cs = [Fraction(c) for c in cs]
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def is_zero(f: Poly) -> bool:
    return not f


def degree(f: Poly) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(f) - 1


def leading(f: Poly) -> Fraction:
    if not f:
        raise ValueError("zero polynomial has no leading coefficient")
    return f[-1]


def add(f: Poly, g: Poly) -> Poly:
    out = [Fraction(0)] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    return trim(out)


def neg(f: Poly) -> Poly:
    return [-c for c in f]


def sub(f: Poly, g: Poly) -> Poly:
    return add(f, neg(g))


def scale(f: Poly, c) -> Poly:
    c = Fraction(c)
    return [] if c == 0 else trim([c * a for a in f])


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out)


def pow_(f: Poly, e: int) -> Poly:
    out = [Fraction(1)]
    for _ in range(e):
        out = mul(out, f)
    return out


def divmod_(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Euclidean division f = g*q + r with deg r < deg g."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(f) - len(g) + 1)
    r = list(f)
    dg, lg = degree(g), leading(g)
    while len(r) >= len(g):
        c = r[-1] / lg
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] -= c * b
        r = trim(r)
        if not r:
            break
    return trim(q), r


def monic(f: Poly) -> Poly:
    return scale(f, 1 / leading(f)) if f else []


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor."""
    a, b = list(f), list(g)
    while b:
        a, b = b, divmod_(a, b)[1]
    return monic(a) if a else []


def coprime(f: Poly, g: Poly) -> bool:
    return degree(gcd(f, g)) <= 0


def derivative(f: Poly) -> Poly:
    return trim([i * c for i, c in enumerate(f)][1:])


def evaluate(f: Poly, x) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def shift_argument(f: Poly, b) -> Poly:
    """Coefficients of f(w + b), i.e. the Taylor expansion at b."""
    b = Fraction(b)
    out = []
    rest = list(f)
    while rest:
        rest, r = divmod_(rest, [-b, Fraction(1)])
        out.append(r[0] if r else Fraction(0))
    return trim(out)


def squarefree_decomposition(f: Poly) -> tuple[Fraction, list[tuple[Poly, int]]]:
    """Yun's algorithm: f = c * prod_i a_i^i with the a_i monic, squarefree,
    and pairwise coprime.  Characteristic zero only."""
    if not f:
        raise ValueError("zero polynomial")
    c = leading(f)
    f = monic(f)
    if degree(f) == 0:
        return c, []
    d = gcd(f, derivative(f))
    b = divmod_(f, d)[0]
    w = sub(divmod_(derivative(f), d)[0], derivative(b))
    parts = []
    i = 1
    while degree(b) > 0:
        a = gcd(b, w)
        if degree(a) > 0:
            parts.append((a, i))
        b = divmod_(b, a)[0]
        w = sub(divmod_(w, a)[0], derivative(b))
        i += 1
    return c, parts


def radical(f: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of f."""
    _, parts = squarefree_decomposition(f)
    out = [Fraction(1)]
    for a, _ in parts:
        out = mul(out, a)
    return out


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(f: Poly) -> tuple[list[tuple[Fraction, int]], Poly]:
    """All rational roots with multiplicities, plus the rootless cofactor.

    The cofactor keeps f's leading coefficient, so
    f = cofactor * prod (z - root)^mult exactly.
    """
    if not f:
        raise ValueError("zero polynomial")
    roots = []
    rest = list(f)
    m0 = 0
    while rest and rest[0] == 0:
        rest = rest[1:]
        m0 += 1
    if m0:
        roots.append((Fraction(0), m0))
    if degree(rest) >= 1:
        den_lcm = 1
        for c in rest:
            den_lcm = den_lcm * c.denominator // int_gcd(den_lcm, c.denominator)
        zz = [int(c * den_lcm) for c in rest]
        g = 0
        for c in zz:
            g = int_gcd(g, c)
        zz = [c // g for c in zz]
        candidates = set()
        for a in _int_divisors(zz[0]):
            for b in _int_divisors(zz[-1]):
                candidates.add(Fraction(a, b))
                candidates.add(Fraction(-a, b))
        for r in sorted(candidates):
            mult = 0
            while evaluate(rest, r) == 0:
                rest = divmod_(rest, [-r, Fraction(1)])[0]
                mult += 1
            if mult:
                roots.append((r, mult))
    return roots, rest


def from_roots(c, roots) -> Poly:
    """c * prod (z - r)^m as an exact polynomial."""
    out = [Fraction(c)]
    for r, m in roots:
        out = mul(out, pow_([-Fraction(r), Fraction(1)], m))
    return out
