"""Witness functions on PG(2, p) u {O} and the bounds they certify.

A balanced function on Z_p^3 (constant on punctured lines) is the same thing as
a function on the projective plane plus the extra point O.  Its transform is
again balanced, and on point masses it reads

    delta_O^  = 1
    delta_P^  = p delta_{P^perp} + p delta_O - 1

which is all :func:`proj_fourier` needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._field import Prime, canonical, exact_matvec, index_of, tables
from ._surd import Surd, compare
from .projective_plane import ProjSet, is_blocking, plane
from .zp3_fourier import GroupFunction

O = "O"


@dataclass(frozen=True)
class BalancedFunction:
    """Rational values on the plane's points (canonical order) and at O."""

    p: int
    value_at_O: Fraction
    values: tuple

    def __post_init__(self):
        p = int(Prime(self.p))
        vals = tuple(Fraction(v) for v in self.values)
        if len(vals) != plane(p).size:
            raise ValueError(f"expected {plane(p).size} point values, got {len(vals)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "value_at_O", Fraction(self.value_at_O))
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, p: int) -> "BalancedFunction":
        return cls(p, 0, [0] * plane(p).size)

    @classmethod
    def delta_O(cls, p: int) -> "BalancedFunction":
        return cls(p, 1, [0] * plane(p).size)

    @classmethod
    def delta(cls, p: int, P: Sequence[int]) -> "BalancedFunction":
        vals = [0] * plane(p).size
        vals[plane(p).index[canonical(P, p)]] = 1
        return cls(p, 0, vals)

    @classmethod
    def indicator(cls, S: ProjSet) -> "BalancedFunction":
        return cls(S.p, int(S.contains_O), [int(b) for b in S.mask])

    @classmethod
    def constant(cls, p: int, c=1) -> "BalancedFunction":
        return cls(p, c, [c] * plane(p).size)

    @classmethod
    def from_group_function(cls, f: GroupFunction) -> "BalancedFunction":
        """Read off a balanced exact function on Z_p^3."""
        if not f.exact:
            raise ValueError("need an exact function")
        if not f.is_balanced():
            raise ValueError("not balanced: the function is not constant on punctured lines")
        t = tables(f.p)
        return cls(f.p, f.values[0], [f.values[index_of(pt, f.p)] for pt in t.proj_points])

    def lift(self) -> GroupFunction:
        """Constant extension along punctured lines."""
        t = tables(self.p)
        vals = np.array(list(self.values) + [self.value_at_O], dtype=object)
        return GroupFunction(self.p, vals[t.proj_index])

    def __call__(self, P):
        if isinstance(P, str) and P == O:
            return self.value_at_O
        return self.values[plane(self.p).index[canonical(P, self.p)]]

    def __add__(self, other: "BalancedFunction") -> "BalancedFunction":
        if other.p != self.p:
            raise ValueError(f"mismatched moduli {self.p} and {other.p}")
        return BalancedFunction(self.p, self.value_at_O + other.value_at_O,
                                [a + b for a, b in zip(self.values, other.values)])

    def __mul__(self, c) -> "BalancedFunction":
        c = Fraction(c)
        return BalancedFunction(self.p, c * self.value_at_O, [c * v for v in self.values])

    __rmul__ = __mul__

    def __sub__(self, other: "BalancedFunction") -> "BalancedFunction":
        return self + other * -1

    def support(self) -> ProjSet:
        """Points (and O) where the function is positive."""
        return ProjSet.from_mask(self.p, [v > 0 for v in self.values], self.value_at_O > 0)

    def to_json(self) -> dict:
        pts = plane(self.p).points
        return {
            "p": self.p,
            "value_at_O": str(self.value_at_O),
            "values": [[list(pt), str(v)] for pt, v in zip(pts, self.values)],
        }

    @classmethod
    def from_json(cls, data) -> "BalancedFunction":
        try:
            p = data["p"]
            vals = [0] * plane(p).size
            for pt, v in data["values"]:
                vals[plane(p).index[canonical(pt, p)]] = Fraction(v)
            return cls(p, Fraction(data["value_at_O"]), vals)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed balanced function JSON: {exc}") from exc


def proj_fourier(f: BalancedFunction) -> BalancedFunction:
    """Transform of a balanced function, computed on PG(2, p) u {O}.

    fhat(O) = f(O) + (p - 1) sum_P f(P)
    fhat(Q) = f(O) - sum_P f(P) + p sum_{P in Q^perp} f(P)
    """
    p = f.p
    total = sum(f.values, Fraction(0))
    on_line = exact_matvec(plane(p).incidence, f.values)
    base = f.value_at_O - total
    return BalancedFunction(p, f.value_at_O + (p - 1) * total, [base + p * s for s in on_line])


def is_witness(h: BalancedFunction, E: ProjSet) -> bool:
    """h <= 0 off E u {O}, transform >= 0 everywhere and > 0 at O."""
    if E.p != h.p:
        raise ValueError(f"mismatched moduli {h.p} and {E.p}")
    allowed = E.mask
    if any(v > 0 for v, ok in zip(h.values, allowed) if not ok):
        return False
    ht = proj_fourier(h)
    return ht.value_at_O > 0 and all(v >= 0 for v in ht.values)


def delsarte_bound(h: BalancedFunction) -> Fraction:
    """|G| h(O) / hhat(O): the largest size a set with admissible differences can have."""
    ht_O = proj_fourier(h).value_at_O
    if ht_O <= 0:
        raise ValueError("the transform must be positive at O")
    return Fraction(h.p ** 3) * h.value_at_O / ht_O


def excluded_cardinalities(p: int, bound: Fraction) -> list[int]:
    """k with 1 < k < p whose spectral sets of size pk would exceed the bound."""
    return [k for k in range(2, p) if p * k > bound]


@dataclass(frozen=True)
class WitnessReport:
    valid: bool
    h_at_O: Fraction
    ht_at_O: Fraction
    bound: Optional[Fraction]
    excluded_k: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "h_at_O": str(self.h_at_O),
            "ht_at_O": str(self.ht_at_O),
            "bound": None if self.bound is None else str(self.bound),
            "excluded_k": list(self.excluded_k),
        }


def witness_report(h: BalancedFunction, E: Optional[ProjSet] = None) -> WitnessReport:
    """Certify h against the forbidden set E (default: where h is positive).

    Exclusions are only reported for valid witnesses.
    """
    if E is None:
        E = h.support().without_O()
    ht_O = proj_fourier(h).value_at_O
    valid = is_witness(h, E)
    bound = delsarte_bound(h) if ht_O > 0 else None
    excluded = excluded_cardinalities(h.p, bound) if valid else []
    return WitnessReport(valid, h.value_at_O, ht_O, bound, excluded)


# --------------------------------------------------------------------------
# explicit constructions


def tfold_witness(S_prime: ProjSet, t: int = 1) -> BalancedFunction:
    """h = delta_{S'} + (|S'| - t p) delta_O for a t-fold blocking set S'.

    Its transform is p (|S' cap Q^perp| - t) at every Q and p (|S'| - t) at O.
    """
    p = S_prime.p
    if t < 1:
        raise ValueError("t must be a positive integer")
    if t > 1 and t >= p - 1:
        raise ValueError(f"t = {t} is impossible in PG(2, {p}); need t <= p - 2")
    if not is_blocking(S_prime.without_O(), t) or S_prime.contains_O:
        raise ValueError(f"S' is not a {t}-fold blocking set")
    size = len(S_prime)
    if size <= t * p:
        raise ValueError(f"need |S'| > {t * p}, got {size}")
    return BalancedFunction(p, size - t * p, [int(b) for b in S_prime.mask])


def section5_witness(S_prime: ProjSet) -> BalancedFunction:
    """h = delta_{S'} + (|S'| - p) delta_O for a blocking set S'."""
    return tfold_witness(S_prime, 1)


def section5_ratio(p: int, size: int, t: int = 1) -> Fraction:
    """h(O)/hhat(O) of the t-fold witness, as a function of |S'| only."""
    return Fraction(size - t * p, p * (size - t))


# --------------------------------------------------------------------------
# thresholds


@dataclass(frozen=True)
class ExclusionInterval:
    """Open interval (lower, p^2) of cardinalities that cannot be spectral."""

    p: int
    t: int
    lower: Surd
    upper: int

    def contains(self, n: int) -> bool:
        return compare(n, self.lower) > 0 and n < self.upper

    def excluded_k(self) -> list[int]:
        return [k for k in range(2, self.p) if self.contains(self.p * k)]

    def widens(self, other: "ExclusionInterval") -> bool:
        """True if this interval strictly contains ``other`` (same upper end)."""
        return self.upper == other.upper and compare(self.lower, other.lower) < 0


def spectral_exclusion_threshold(p: int, t: int = 1) -> ExclusionInterval:
    """Cardinalities excluded by the t-fold witnesses (t = 1 or 3).

    t = 1: p^2 - p sqrt(p) + sqrt(p) < |A| < p^2.
    t = 3: p (p - 3(p-1)/(sqrt(3p-5) + 1)) < |A| < p^2, rationalised as
    p^2 + c - c sqrt(3p - 5) with c = p (p-1)/(p-2).
    """
    p = int(Prime(p))
    if t == 1:
        lower = Surd(p * p, -(p - 1), p)
    elif t == 3:
        if p < 5:
            raise ValueError("3-fold blocking sets need p >= 5")
        c = Fraction(p * (p - 1), p - 2)
        lower = Surd(p * p + c, -c, 3 * p - 5)
    else:
        raise ValueError(f"unsupported t = {t}; thresholds are known for t = 1 and t = 3")
    return ExclusionInterval(p, t, lower, p * p)
