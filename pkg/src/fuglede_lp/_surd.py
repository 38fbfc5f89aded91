"""Exact comparisons for numbers of the form a + b*sqrt(d) with rational a, b."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Surd:
    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    def __post_init__(self):
        a, b, d = Fraction(self.a), Fraction(self.b), int(self.d)
        if d < 0:
            raise ValueError("radicand must be nonnegative")
        # pull square factors out of the radical
        f = 2
        while f * f <= d:
            while d % (f * f) == 0:
                d //= f * f
                b *= f
            f += 1
        if d == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            d = 1
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: the larger magnitude wins
        return sa * _sign(self.a * self.a - self.b * self.b * self.d)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __neg__(self) -> "Surd":
        return Surd(-self.a, -self.b, self.d)

    def __sub__(self, other) -> "Surd":
        other = _lift(other)
        if other.d not in (1, self.d) and self.d != 1:
            raise ValueError("subtraction needs a common radicand; use compare()")
        d = self.d if self.d != 1 else other.d
        return Surd(self.a - other.a, self.b - other.b, d)

    def __lt__(self, other) -> bool:
        return compare(self, other) < 0

    def __le__(self, other) -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other) -> bool:
        return compare(self, other) > 0

    def __ge__(self, other) -> bool:
        return compare(self, other) >= 0

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        coef = "" if abs(self.b) == 1 else f"{abs(self.b)}*"
        rad = f"{coef}sqrt({self.d})"
        if self.a == 0:
            return rad if self.b > 0 else f"-{rad}"
        return f"{self.a} {'+' if self.b > 0 else '-'} {rad}"


def _lift(x) -> Surd:
    return x if isinstance(x, Surd) else Surd(Fraction(x))


def compare(x, y) -> int:
    """Sign of x - y for surds with possibly different radicands."""
    x, y = _lift(x), _lift(y)
    if x.d == y.d or 1 in (x.d, y.d):
        return (x - y).sign()
    u = Surd(x.a - y.a, x.b, x.d)
    z, e = -y.b, y.d
    su, sz = u.sign(), _sign(z)
    if sz == 0 or su == sz:
        return su or sz
    if su == 0:
        return sz
    # |u| against |z| sqrt(e): compare u^2 with z^2 e
    sq = Surd(u.a * u.a + u.b * u.b * u.d - z * z * e, 2 * u.a * u.b, u.d)
    s2 = sq.sign()
    if s2 > 0:
        return su
    if s2 < 0:
        return sz
    return 0
