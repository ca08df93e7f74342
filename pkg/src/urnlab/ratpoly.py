"""Exact univariate polynomial arithmetic over the rationals.

Coefficient sequences are low-to-high degree tuples of ``Fraction``.  All
sign decisions (root counting, isolation, interval minimization) are exact;
floating point never enters, so knife-edge cases such as a polynomial that
vanishes only at an interval endpoint are decided correctly.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Coeffs = tuple[Fraction, ...]

ZERO = ()


def poly(coeffs: Iterable) -> Coeffs:
    """Build a normalized coefficient tuple (trailing zeros stripped)."""
    cs = [Fraction(c) for c in coeffs]
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def degree(p: Coeffs) -> int:
    """Degree of p; -1 for the zero polynomial."""
    return len(p) - 1


def is_zero(p: Coeffs) -> bool:
    return len(p) == 0


def add(p: Coeffs, q: Coeffs) -> Coeffs:
    n = max(len(p), len(q))
    return poly(
        (p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)
    )


def neg(p: Coeffs) -> Coeffs:
    return tuple(-c for c in p)


def sub(p: Coeffs, q: Coeffs) -> Coeffs:
    return add(p, neg(q))


def mul(p: Coeffs, q: Coeffs) -> Coeffs:
    if is_zero(p) or is_zero(q):
        return ZERO
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def scale(p: Coeffs, k) -> Coeffs:
    k = Fraction(k)
    if k == 0:
        return ZERO
    return tuple(c * k for c in p)


def evaluate(p: Coeffs, x) -> Fraction:
    """Horner evaluation; exact for rational x."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Coeffs) -> Coeffs:
    return poly(i * c for i, c in enumerate(p) if i > 0)


def divmod_poly(p: Coeffs, d: Coeffs) -> tuple[Coeffs, Coeffs]:
    """Euclidean division: p = q*d + r with deg r < deg d."""
    if is_zero(d):
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    q = [Fraction(0)] * max(len(p) - len(d) + 1, 1)
    dd = degree(d)
    lead = d[-1]
    while len(r) - 1 >= dd and any(c != 0 for c in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dd:
            break
        k = len(r) - 1 - dd
        factor = r[-1] / lead
        q[k] = factor
        for i in range(len(d)):
            r[k + i] -= factor * d[i]
        r.pop()
    return poly(q), poly(r)


def poly_gcd(p: Coeffs, q: Coeffs) -> Coeffs:
    """Monic gcd via the Euclidean algorithm."""
    a, b = p, q
    while not is_zero(b):
        a, b = b, divmod_poly(a, b)[1]
    if is_zero(a):
        return ZERO
    return scale(a, Fraction(1) / a[-1])


def square_free(p: Coeffs) -> Coeffs:
    """p divided by gcd(p, p'): same roots, all simple."""
    if degree(p) < 1:
        return p
    g = poly_gcd(p, derivative(p))
    if degree(g) < 1:
        return p
    return divmod_poly(p, g)[0]


def sturm_chain(p: Coeffs) -> list[Coeffs]:
    chain = [p, derivative(p)]
    while not is_zero(chain[-1]) and degree(chain[-1]) > 0:
        chain.append(neg(divmod_poly(chain[-2], chain[-1])[1]))
    if is_zero(chain[-1]):
        chain.pop()
    return chain


def sign_variations(chain: Sequence[Coeffs], x) -> int:
    signs = []
    for f in chain:
        v = evaluate(f, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _deflate_root(p: Coeffs, r: Fraction) -> tuple[Coeffs, int]:
    """Divide out (x - r) as many times as it is a root; return (quotient, multiplicity)."""
    mult = 0
    while not is_zero(p) and evaluate(p, r) == 0:
        p = divmod_poly(p, poly([-r, 1]))[0]
        mult += 1
    return p, mult


def count_roots_open(p: Coeffs, a, b) -> int:
    """Number of distinct real roots of p in the open interval (a, b). Exact."""
    a, b = Fraction(a), Fraction(b)
    if a >= b:
        return 0
    if is_zero(p):
        raise ValueError("root count undefined for the zero polynomial")
    p, _ = _deflate_root(p, a)
    p, _ = _deflate_root(p, b)
    if degree(p) < 1:
        return 0
    q = square_free(p)
    chain = sturm_chain(q)
    # q(a) != 0 and q(b) != 0, so V(a) - V(b) counts roots in (a, b].
    return sign_variations(chain, a) - sign_variations(chain, b)


def rational_roots(p: Coeffs) -> list[Fraction]:
    """All rational roots of p, ascending, via the rational root theorem."""
    if degree(p) < 1:
        return []
    den = lcm(*(c.denominator for c in p))
    ints = [int(c * den) for c in p]
    shift = 0
    while ints[shift] == 0:
        shift += 1
    roots = set()
    if shift:
        roots.add(Fraction(0))
        ints = ints[shift:]
    c0, cn = abs(ints[0]), abs(ints[-1])

    def divisors(n: int) -> list[int]:
        out = []
        i = 1
        while i * i <= n:
            if n % i == 0:
                out.append(i)
                out.append(n // i)
            i += 1
        return out

    for num in divisors(c0):
        for dnm in divisors(cn):
            for cand in (Fraction(num, dnm), Fraction(-num, dnm)):
                if evaluate(p, cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def isolate_roots(p: Coeffs, a, b) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct real roots of p in [a, b].

    Returns (lo, hi) pairs in ascending order; lo == hi marks an exact
    rational root, otherwise the open interval (lo, hi) contains exactly
    one root and no interval endpoint is a root.
    """
    a, b = Fraction(a), Fraction(b)
    if is_zero(p):
        raise ValueError("cannot isolate roots of the zero polynomial")
    if a > b:
        return []
    q = square_free(p)
    found: list[tuple[Fraction, Fraction]] = []
    for r in rational_roots(q):
        if a <= r <= b:
            found.append((r, r))
            q, _ = _deflate_root(q, r)
    if degree(q) >= 1:
        chain = sturm_chain(q)

        def count(lo: Fraction, hi: Fraction) -> int:
            return sign_variations(chain, lo) - sign_variations(chain, hi)

        def split(lo: Fraction, hi: Fraction, n: int) -> None:
            if n == 0:
                return
            if n == 1:
                found.append((lo, hi))
                return
            mid = (lo + hi) / 2
            # q has no rational roots left, so q(mid) != 0.
            split(lo, mid, count(lo, mid))
            split(mid, hi, count(mid, hi))

        split(a, b, count(a, b))
    return sorted(found)


def refine_root(p: Coeffs, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of a simple root by sign bisection."""
    flo = evaluate(p, lo)
    if flo == 0:
        return lo, lo
    if evaluate(p, hi) == 0:
        return hi, hi
    neg_side = flo < 0
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = evaluate(p, mid)
        if fm == 0:
            return mid, mid
        if (fm < 0) == neg_side:
            lo = mid
        else:
            hi = mid
    return lo, hi


def real_roots(p: Coeffs, a, b, width=Fraction(1, 10**18)) -> list[tuple[Fraction, bool]]:
    """Distinct real roots of p in [a, b] as (value, exact) pairs.

    Rational roots come back exact; irrational ones as midpoints of a
    bisection-refined bracket no wider than ``width``.
    """
    out = []
    sf = square_free(p) if degree(p) >= 1 else p
    for lo, hi in isolate_roots(p, a, b):
        if lo == hi:
            out.append((lo, True))
        else:
            rlo, rhi = refine_root(sf, lo, hi, Fraction(width))
            if rlo == rhi:
                out.append((rlo, True))
            else:
                out.append(((rlo + rhi) / 2, False))
    return out


def min_on_interval(p: Coeffs, a, b) -> tuple[Fraction, Fraction, bool]:
    """Minimum of p on [a, b]: (value, argmin, exact).

    Candidates are the endpoints plus real critical points inside the
    interval.  Rational critical points give an exact result; irrational
    ones are refined to width 1e-18, far below any comparison tolerance
    used downstream.  Ties resolve to the smallest argmin.
    """
    a, b = Fraction(a), Fraction(b)
    if a > b:
        raise ValueError("empty interval")
    candidates: list[tuple[Fraction, Fraction, bool]] = [
        (evaluate(p, a), a, True),
        (evaluate(p, b), b, True),
    ]
    dp = derivative(p)
    if degree(dp) >= 1:
        for r, exact in real_roots(dp, a, b):
            if a < r < b:
                candidates.append((evaluate(p, r), r, exact))
    candidates.sort(key=lambda t: (t[0], t[1]))
    return candidates[0]
