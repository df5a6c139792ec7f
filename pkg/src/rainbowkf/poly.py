"""Exact integer polynomials: characteristic polynomials and Sturm root isolation.

Polynomials are tuples of Python ints in ascending degree order. Nothing on
this path touches floating point except the optional isolation hint, which is
always re-verified with Sturm counts before being trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

Poly = tuple[int, ...]
Rational = Fraction


@dataclass(frozen=True)
class CharPoly:
    """Monic integer polynomial, ``coeffs[i]`` multiplies ``x**i``."""

    coeffs: Poly

    def __post_init__(self) -> None:
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError("characteristic polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def descending(self) -> list[int]:
        return list(reversed(self.coeffs))

    def __call__(self, x: Fraction | int) -> Fraction:
        return evaluate(self.coeffs, Fraction(x))

    def __str__(self) -> str:
        return format_poly(self.coeffs)


def format_poly(p: Sequence[int], var: str = "x") -> str:
    terms = []
    for d in range(len(p) - 1, -1, -1):
        c = p[d]
        if c == 0:
            continue
        mag = abs(c)
        body = var if d == 1 else f"{var}^{d}" if d > 1 else ""
        coef = "" if mag == 1 and d > 0 else str(mag)
        sign = "-" if c < 0 else "+"
        terms.append((sign, coef + body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, t in terms[1:]:
        out += f" {sign} {t}"
    return out


def char_poly(m: Sequence[Sequence[int]]) -> CharPoly:
    """det(xI - M) for a square integer matrix, by Faddeev-LeVerrier.

    Every division in the recurrence is exact over the integers, so the whole
    computation stays in arbitrary-precision ints.
    """
    a = np.array(m, dtype=object)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("char_poly needs a square matrix")
    n = a.shape[0]
    if n == 0:
        return CharPoly((1,))
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    ident = np.identity(n, dtype=int).astype(object)
    mk = np.zeros((n, n), dtype=object)
    for k in range(1, n + 1):
        mk = a.dot(mk) + coeffs[n - k + 1] * ident
        tr = int(np.trace(a.dot(mk)))
        if tr % k:
            raise ArithmeticError("non-integral Faddeev-LeVerrier step")
        coeffs[n - k] = -tr // k
    return CharPoly(tuple(int(c) for c in coeffs))


# -- basic arithmetic -----------------------------------------------------------


def trim(p: Sequence) -> list:
    out = list(p)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    p = trim(p)
    return -1 if p == [0] else len(p) - 1


def evaluate(p: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign_at(p: Sequence[int], x: Fraction) -> int:
    """Sign of an integer polynomial at a rational point, in integer arithmetic."""
    num, den = x.numerator, x.denominator
    d = len(p) - 1
    total = 0
    pw_num = 1
    pw_den = den**d
    for c in p:
        total += c * pw_num * pw_den
        pw_num *= num
        pw_den //= den
    return (total > 0) - (total < 0)


def derivative(p: Sequence[int]) -> list[int]:
    if len(p) <= 1:
        return [0]
    return [i * p[i] for i in range(1, len(p))]


def primitive(p: Sequence) -> list[int]:
    """Positive rescaling of a rational polynomial to coprime integer coefficients."""
    fr = [Fraction(c) for c in trim(p)]
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, c)
    if g == 0:
        return [0]
    return [c // g for c in ints]


def monic_primitive(p: Sequence) -> list[int]:
    """Primitive integer polynomial with positive leading coefficient."""
    q = primitive(p)
    return [-c for c in q] if q[-1] < 0 else q


def divmod_poly(a: Sequence, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    a = [Fraction(c) for c in trim(a)]
    b = [Fraction(c) for c in trim(b)]
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    quot = [Fraction(0)] * (len(a) - db)
    rem = list(a)
    lead = b[-1]
    for i in range(len(a) - 1 - db, -1, -1):
        c = rem[i + db] / lead
        quot[i] = c
        if c:
            for j, bc in enumerate(b):
                rem[i + j] -= c * bc
    return trim(quot), trim(rem[:db] or [Fraction(0)])


def poly_gcd(a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = monic_primitive(a), monic_primitive(b)
    while b != [0]:
        _, r = divmod_poly(a, b)
        a, b = b, (monic_primitive(r) if trim(r) != [0] else [0])
    return a


def squarefree(p: Sequence[int]) -> list[int]:
    g = poly_gcd(p, derivative(p))
    if degree(g) <= 0:
        return monic_primitive(p)
    q, r = divmod_poly(p, g)
    assert trim(r) == [0]
    return monic_primitive(q)


# -- Sturm machinery ------------------------------------------------------------


def sturm_sequence(p: Sequence[int]) -> list[list[int]]:
    """Sturm chain of a square-free integer polynomial (positive rescalings only)."""
    seq = [monic_primitive(p)]
    if degree(seq[0]) <= 0:
        return seq
    seq.append(primitive(derivative(seq[0])))
    while degree(seq[-1]) > 0:
        _, r = divmod_poly(seq[-2], seq[-1])
        if trim(r) == [0]:
            break
        seq.append(primitive([-c for c in r]))
    return seq


def sign_changes(seq: Sequence[Sequence[int]], x: Fraction) -> int:
    last = 0
    changes = 0
    for p in seq:
        s = sign_at(p, x)
        if s == 0:
            continue
        if last and s != last:
            changes += 1
        last = s
    return changes


def root_bound(p: Sequence[int]) -> int:
    """Integer strictly larger than the modulus of every root (Cauchy bound)."""
    p = trim(p)
    lead = abs(p[-1])
    m = max((abs(c) for c in p[:-1]), default=0)
    return 1 + -(-m // lead) + 1


class SturmCounter:
    """Counts distinct real roots of a polynomial in half-open intervals (a, b]."""

    def __init__(self, p: Sequence[int]):
        self.poly = squarefree(p)
        if degree(self.poly) < 0:
            raise ValueError("zero polynomial has no isolated roots")
        self.seq = sturm_sequence(self.poly)
        self.bound = Fraction(root_bound(self.poly))

    def is_root(self, x: Fraction) -> bool:
        return sign_at(self.poly, x) == 0

    def above(self, x: Fraction) -> int:
        """Number of roots strictly greater than x."""
        return sign_changes(self.seq, x) - sign_changes(self.seq, self.bound)

    def between(self, a: Fraction, b: Fraction) -> int:
        """Roots in the half-open interval (a, b]."""
        return sign_changes(self.seq, a) - sign_changes(self.seq, b)

    def in_open(self, a: Fraction, b: Fraction) -> int:
        if a >= b:
            return 0
        return self.between(a, b) - self.is_root(b)


@dataclass(frozen=True)
class RootInterval:
    """Enclosure of one real root: the open interval (lo, hi), or the point lo == hi."""

    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction | float) -> bool:
        x = Fraction(x)
        return x == self.lo if self.exact else self.lo < x < self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


def _as_fraction(x: Fraction | float | int | str) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def isolate_largest_root(
    p: Sequence[int] | CharPoly,
    precision: Fraction | float | str = Fraction(1, 10**10),
    hint: float | None = None,
) -> RootInterval:
    """Sturm-certified enclosure of the largest real root of ``p``.

    The returned interval has width at most ``precision`` and contains no other
    root of ``p``. A rational largest root hit during bisection is returned as
    an exact point.
    """
    coeffs = p.coeffs if isinstance(p, CharPoly) else tuple(p)
    counter = SturmCounter(coeffs)
    return _isolate(counter, _as_fraction(precision), hint)


def _isolate(counter: SturmCounter, precision: Fraction, hint: float | None = None) -> RootInterval:
    bound = counter.bound
    if counter.above(-bound) == 0:
        raise ValueError(f"polynomial {format_poly(counter.poly)} has no real root")
    lo, hi = -bound, bound
    if hint is not None:
        delta = Fraction(max(abs(hint), 1.0)) * Fraction(1, 2**30)
        h = Fraction(hint)
        a, b = h - delta, h + delta
        if -bound < a and b < bound and counter.above(b) == 0 and counter.above(a) >= 1:
            lo, hi = a, b
            if counter.is_root(b):
                return RootInterval(b, b)
    return _bisect(counter, lo, hi, precision)


def _bisect(counter: SturmCounter, lo: Fraction, hi: Fraction, precision: Fraction) -> RootInterval:
    # invariant: some root lies above lo, none lies at or above hi
    while hi - lo > precision or counter.above(lo) > 1:
        mid = (lo + hi) / 2
        above = counter.above(mid)
        if above == 0:
            if counter.is_root(mid):
                return RootInterval(mid, mid)
            hi = mid
        else:
            lo = mid
    return RootInterval(lo, hi)


def refine(counter: SturmCounter, iv: RootInterval, precision: Fraction) -> RootInterval:
    if iv.exact or iv.width <= precision:
        return iv
    return _bisect(counter, iv.lo, iv.hi, precision)


def compare_largest_roots(
    p: Sequence[int],
    q: Sequence[int],
    hint_p: float | None = None,
    hint_q: float | None = None,
) -> int:
    """Exact sign of (largest root of p) - (largest root of q)."""
    cp, cq = SturmCounter(p), SturmCounter(q)
    eps = Fraction(1, 2**20)
    ip = _isolate(cp, eps, hint_p)
    iq = _isolate(cq, eps, hint_q)
    common = poly_gcd(cp.poly, cq.poly)
    shared = SturmCounter(common) if degree(common) >= 1 else None
    while True:
        if _left_of(ip, iq):
            return -1
        if _left_of(iq, ip):
            return 1
        if shared is not None and _shares_root(shared, ip, iq):
            return 0
        eps /= 2**16
        ip = refine(cp, ip, eps)
        iq = refine(cq, iq, eps)


def _left_of(a: RootInterval, b: RootInterval) -> bool:
    """Every point of a lies strictly below every point of b."""
    if a.exact and b.exact:
        return a.lo < b.lo
    return a.hi <= b.lo


def _shares_root(g: SturmCounter, a: RootInterval, b: RootInterval) -> bool:
    if a.exact or b.exact:
        x = a.lo if a.exact else b.lo
        return a.contains(x) and b.contains(x) and g.is_root(x)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    return g.in_open(lo, hi) > 0
