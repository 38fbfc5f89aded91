"""Exact Fourier analysis of subsets and functions on Z_p^3.

Characters are xi_x(y) = zeta^<x,y> with zeta = exp(2 pi i / p), and the
transform is ``fhat(x) = sum_y f(y) zeta^(-<x,y>)``.

Values that are rational by Galois symmetry (for instance transforms of
balanced functions) are computed exactly from level sums: for a rational
vector ``m_0..m_{p-1}`` the number ``sum_j m_j zeta^j`` is rational exactly when
``m_1 = ... = m_{p-1}``, in which case it equals ``m_0 - m_1``.  Anything else
falls back to complex floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from ._field import GroupPoint, Prime, ProjPoint, exact_matvec, index_of, point_of, tables

FLOAT_TOL = 1e-9


# --------------------------------------------------------------------------
# sets


@dataclass(frozen=True, eq=False)
class GroupSet:
    """A subset of Z_p^3 stored as a flat indicator array."""

    p: int
    mask: np.ndarray

    def __post_init__(self):
        p = Prime(self.p)
        mask = np.asarray(self.mask, dtype=bool)
        if mask.shape != (p ** 3,):
            raise ValueError(f"indicator must have length {p ** 3}")
        mask = mask.copy()
        mask.setflags(write=False)
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_elements(cls, p: int, elements: Iterable[Sequence[int]]) -> "GroupSet":
        p = Prime(p)
        mask = np.zeros(p ** 3, dtype=bool)
        for x in elements:
            if len(x) != 3:
                raise ValueError(f"expected 3 coordinates, got {list(x)!r}")
            mask[index_of(x, p)] = True
        return cls(p, mask)

    @classmethod
    def from_indices(cls, p: int, indices: Iterable[int]) -> "GroupSet":
        mask = np.zeros(int(p) ** 3, dtype=bool)
        mask[list(indices)] = True
        return cls(p, mask)

    @classmethod
    def empty(cls, p: int) -> "GroupSet":
        return cls(p, np.zeros(int(p) ** 3, dtype=bool))

    @classmethod
    def full(cls, p: int) -> "GroupSet":
        return cls(p, np.ones(int(p) ** 3, dtype=bool))

    @classmethod
    def line(cls, p: int, direction: Sequence[int]) -> "GroupSet":
        """The line through the origin spanned by ``direction``."""
        if all(c % p == 0 for c in direction):
            raise ValueError("direction must be nonzero")
        return cls.from_elements(p, [[lam * c for c in direction] for lam in range(p)])

    @classmethod
    def plane(cls, p: int, normal: Sequence[int]) -> "GroupSet":
        """The plane through the origin orthogonal to ``normal``."""
        t = tables(p)
        if all(c % p == 0 for c in normal):
            raise ValueError("normal must be nonzero")
        return cls(p, t.dot[index_of(normal, p)] == 0)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def elements(self) -> list[GroupPoint]:
        return [point_of(int(i), self.p) for i in self.indices()]

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, x) -> bool:
        return bool(self.mask[index_of(x, self.p)])

    def __iter__(self):
        return iter(self.elements())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupSet):
            return NotImplemented
        return self.p == other.p and bool(np.array_equal(self.mask, other.mask))

    def __hash__(self) -> int:
        return hash((self.p, self.mask.tobytes()))

    def __repr__(self) -> str:
        return f"GroupSet(p={self.p}, elements={self.elements()})"

    def complement(self) -> "GroupSet":
        return GroupSet(self.p, ~self.mask)

    def translate(self, g: Sequence[int]) -> "GroupSet":
        t = tables(self.p)
        return GroupSet.from_indices(self.p, t.add[self.indices(), index_of(g, self.p)])

    def dilate(self, lam: int) -> "GroupSet":
        if lam % self.p == 0:
            raise ValueError("dilation factor must be nonzero mod p")
        t = tables(self.p)
        return GroupSet.from_indices(self.p, t.scale[lam % self.p, self.indices()])

    def indicator(self) -> "GroupFunction":
        return GroupFunction(self.p, np.array([int(b) for b in self.mask], dtype=object))

    def to_json(self) -> dict:
        return {"p": self.p, "elements": [list(x) for x in self.elements()]}

    @classmethod
    def from_json(cls, data) -> "GroupSet":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls.from_elements(data["p"], data["elements"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed set JSON: {exc}") from exc


# --------------------------------------------------------------------------
# functions


def _exact(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else v
    raise TypeError(f"not an exact rational: {v!r}")


@dataclass(frozen=True, eq=False)
class GroupFunction:
    """A function Z_p^3 -> C.

    Exact functions hold ints/Fractions in an object array; inexact ones hold
    complex128.  The choice is made at construction from the value types.
    """

    p: int
    values: np.ndarray

    def __post_init__(self):
        p = Prime(self.p)
        vals = np.asarray(self.values)
        if vals.shape != (p ** 3,):
            raise ValueError(f"function must have {p ** 3} values")
        if vals.dtype == object or np.issubdtype(vals.dtype, np.integer):
            try:
                vals = np.array([_exact(v) for v in vals], dtype=object)
            except TypeError:
                vals = vals.astype(complex)
        else:
            vals = vals.astype(complex)
        vals.setflags(write=False)
        object.__setattr__(self, "p", int(p))
        object.__setattr__(self, "values", vals)

    @property
    def exact(self) -> bool:
        return self.values.dtype == object

    @classmethod
    def from_callable(cls, p: int, fn: Callable[[GroupPoint], object]) -> "GroupFunction":
        p = Prime(p)
        return cls(p, np.array([fn(point_of(i, p)) for i in range(p ** 3)], dtype=object))

    @classmethod
    def delta(cls, p: int, x: Sequence[int] = (0, 0, 0)) -> "GroupFunction":
        vals = np.zeros(int(p) ** 3, dtype=object)
        vals[index_of(x, p)] = 1
        return cls(p, vals)

    @classmethod
    def constant(cls, p: int, c=1) -> "GroupFunction":
        return cls(p, np.full(int(p) ** 3, c, dtype=object))

    def __call__(self, x):
        return self.values[index_of(x, self.p)]

    def as_complex(self) -> np.ndarray:
        return self.values.astype(complex)

    def _binary(self, other, op):
        if isinstance(other, GroupFunction):
            if other.p != self.p:
                raise ValueError(f"mismatched moduli {self.p} and {other.p}")
            if self.exact and other.exact:
                return GroupFunction(self.p, op(self.values, other.values))
            return GroupFunction(self.p, op(self.as_complex(), other.as_complex()))
        if self.exact and isinstance(other, (int, Fraction)):
            return GroupFunction(self.p, op(self.values, np.full(self.values.shape, other, dtype=object)))
        return GroupFunction(self.p, op(self.as_complex(), complex(other)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        return self._binary(other, np.multiply)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def equals(self, other: "GroupFunction", tol: float = FLOAT_TOL) -> bool:
        """Exact equality when both sides are exact, else max-abs within ``tol``."""
        if self.p != other.p:
            return False
        if self.exact and other.exact:
            return all(a == b for a, b in zip(self.values, other.values))
        return bool(np.max(np.abs(self.as_complex() - other.as_complex())) <= tol)

    def reflect(self) -> "GroupFunction":
        """x -> f(-x)."""
        return GroupFunction(self.p, self.values[tables(self.p).neg])

    def is_even(self, tol: float = FLOAT_TOL) -> bool:
        return self.equals(self.reflect(), tol)

    def is_balanced(self, tol: float = FLOAT_TOL) -> bool:
        """Constant on every punctured line through the origin."""
        t = tables(self.p)
        return all(self.equals(GroupFunction(self.p, self.values[t.scale[lam]]), tol) for lam in range(2, self.p))


def _as_group_function(f) -> GroupFunction:
    if not isinstance(f, GroupFunction):
        raise TypeError(f"expected GroupFunction, got {type(f).__name__}")
    return f


def _level_sums(values: np.ndarray, p: int) -> list:
    """sums[j][x] = sum of values(y) over <x, y> = j."""
    dot = tables(p).dot
    return [exact_matvec(dot == j, values) for j in range(p)]


@lru_cache(maxsize=None)
def _character_matrix(p: int) -> np.ndarray:
    m = np.exp(-2j * np.pi * tables(p).dot.astype(float) / p)
    m.setflags(write=False)
    return m


def _exact_sum(values: np.ndarray, p: int):
    """sum_y values(y) zeta^(<x,y>) for every x, or None if some value is irrational."""
    sums = _level_sums(values, p)
    rest = sums[1]
    for s in sums[2:]:
        if any(a != b for a, b in zip(s, rest)):
            return None
    return np.array([_exact(a - b) for a, b in zip(sums[0], rest)], dtype=object)


def fourier_transform(f: GroupFunction) -> GroupFunction:
    """fhat(x) = sum_y f(y) zeta^(-<x,y>)."""
    f = _as_group_function(f)
    p = f.p
    if f.exact:
        # conjugating the levels does not change which coefficients are equal,
        # and the rational value m_0 - m_1 is the same for zeta and 1/zeta
        out = _exact_sum(f.values, p)
        if out is not None:
            return GroupFunction(p, out)
    return GroupFunction(p, _character_matrix(p) @ f.as_complex())


def inverse_transform(g: GroupFunction) -> GroupFunction:
    """f(x) = |G|^-1 sum_xi g(xi) zeta^(<xi,x>)."""
    g = _as_group_function(g)
    p = g.p
    n = p ** 3
    if g.exact:
        out = _exact_sum(g.values, p)
        if out is not None:
            return GroupFunction(p, np.array([Fraction(v) / n for v in out], dtype=object))
    return GroupFunction(p, np.conj(_character_matrix(p)) @ g.as_complex() / n)


def convolve(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """(f*g)(x) = sum_y f(y) g(x - y)."""
    f, g = _as_group_function(f), _as_group_function(g)
    if f.p != g.p:
        raise ValueError(f"mismatched moduli {f.p} and {g.p}")
    sub = tables(f.p).sub
    if f.exact and g.exact:
        return GroupFunction(f.p, g.values[sub].dot(f.values))
    return GroupFunction(f.p, g.as_complex()[sub] @ f.as_complex())


# --------------------------------------------------------------------------
# level counts and zero sets


@dataclass(frozen=True)
class LevelCounts:
    """counts[j] = |A cap {y : <direction, y> = j}|."""

    direction: GroupPoint
    counts: tuple

    @property
    def equidistributed(self) -> bool:
        return len(set(self.counts)) == 1


def level_counts(A: GroupSet, x: Sequence[int]) -> LevelCounts:
    p = A.p
    i = index_of(x, p)
    if i == 0:
        raise ValueError("direction must be nonzero")
    levels = tables(p).dot[i, A.indices()]
    counts = np.bincount(levels, minlength=p)
    return LevelCounts(point_of(i, p), tuple(int(c) for c in counts))


def _count_table(A: GroupSet) -> np.ndarray:
    """(N, p) array of level counts for every direction (row 0 is degenerate)."""
    p = A.p
    levels = tables(p).dot[:, A.indices()]
    return np.stack([(levels == j).sum(axis=1) for j in range(p)], axis=1)


def zero_set(A: GroupSet) -> frozenset[ProjPoint]:
    """Projective points [x] at which the transform of 1_A vanishes.

    Decided by integer level counts only: 1_A-hat(x) = 0 iff A is equidistributed
    over the p planes <x, y> = j.
    """
    t = tables(A.p)
    counts = _count_table(A)
    out = []
    for pt in t.proj_points:
        row = counts[index_of(pt, A.p)]
        if (row == row[0]).all():
            out.append(pt)
    return frozenset(out)


def zero_set_mask(A: GroupSet) -> np.ndarray:
    """Boolean mask over Z_p^3 of the lifted zero set (origin excluded)."""
    t = tables(A.p)
    zs = zero_set(A)
    inside = np.array([pt in zs for pt in t.proj_points] + [False])
    return inside[t.proj_index]


def check_spectral_pair(A: GroupSet, B: GroupSet) -> bool:
    """True iff B is a spectrum of A: |A| = |B| and B - B lies in Z(1_A-hat) u {0}."""
    if A.p != B.p:
        raise ValueError(f"mismatched moduli {A.p} and {B.p}")
    if len(A) != len(B):
        return False
    ok = zero_set_mask(A)
    ok[0] = True
    idx = B.indices()
    diffs = tables(A.p).sub[np.ix_(idx, idx)]
    return bool(ok[diffs].all())


def trace_weight(A: GroupSet) -> GroupFunction:
    """h(x) = sum_{lam=1}^{p-1} |1_A-hat(lam x)|^2, exactly.

    Expanding the square over pairs (a, a') and summing zeta^(lam j) over lam
    gives h(x) = p * sum_j n_j(x)^2 - |A|^2 with n_j the level counts.
    """
    p = A.p
    counts = _count_table(A).astype(object)
    size = len(A)
    vals = p * (counts * counts).sum(axis=1) - size * size
    return GroupFunction(p, vals)


def balance_symmetrize(h: GroupFunction) -> GroupFunction:
    """Average an even function over the scalings x -> lam x, lam != 0."""
    h = _as_group_function(h)
    if not h.is_even():
        raise ValueError("balance_symmetrize needs an even function")
    p = h.p
    scale = tables(p).scale
    if h.exact:
        total = sum((h.values[scale[lam]] for lam in range(1, p)), np.zeros(p ** 3, dtype=object))
        return GroupFunction(p, np.array([Fraction(v, p - 1) for v in total], dtype=object))
    vals = h.as_complex()
    return GroupFunction(p, sum(vals[scale[lam]] for lam in range(1, p)) / (p - 1))
