"""Exact interval arithmetic over Q.

Used to decide signs of algebraic numbers given by polynomial expressions
in a root isolated by a rational interval.  All endpoints are Fractions;
nothing here ever rounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .polynomials import Poly, refine_root


@dataclass(frozen=True)
class Iv:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        assert self.lo <= self.hi

    def __add__(self, other):
        other = _as_iv(other)
        return Iv(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Iv(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_as_iv(other))

    def __rsub__(self, other):
        return _as_iv(other) + (-self)

    def __mul__(self, other):
        other = _as_iv(other)
        vals = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        return Iv(min(vals), max(vals))

    __rmul__ = __mul__

    def inv(self) -> "Iv":
        # only defined away from zero
        if self.lo > 0 or self.hi < 0:
            return Iv(1 / self.hi, 1 / self.lo)
        raise ZeroDivisionError("interval straddles zero")

    def __truediv__(self, other):
        return self * _as_iv(other).inv()

    def __rtruediv__(self, other):
        return _as_iv(other) * self.inv()

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def sign(self) -> int | None:
        """-1, 0 (exact zero point), +1, or None when the sign is undecided."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None


def _as_iv(v) -> Iv:
    if isinstance(v, Iv):
        return v
    f = Fraction(v)
    return Iv(f, f)


def sqrt_interval(d, width=Fraction(1, 2**20)) -> Iv:
    """Interval of the requested width containing sqrt(d), d > 0 rational."""
    d = Fraction(d)
    assert d > 0
    lo = Fraction(isqrt(d.numerator * d.denominator), d.denominator)
    hi = lo + 1
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if mid * mid <= d:
            lo = mid
        else:
            hi = mid
    if hi * hi == d:
        hi += width / 2
    return Iv(lo, hi)


def eval_poly_interval(p: Poly, x: Iv) -> Iv:
    acc = _as_iv(Fraction(0))
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def sign_at_root(g: Poly, minpoly: Poly, root_iv: tuple[Fraction, Fraction]) -> int:
    """Sign of g(r) where r is the root of the irreducible minpoly isolated
    by root_iv.  Exact: returns 0 precisely when minpoly divides g."""
    r = g % minpoly
    if r.is_zero():
        return 0
    lo, hi = root_iv
    while True:
        s = eval_poly_interval(r, Iv(lo, hi)).sign()
        if s is not None and s != 0:
            return s
        lo, hi = refine_root(minpoly, lo, hi, (hi - lo) / 4)
