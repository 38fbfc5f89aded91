"""Shared arithmetic for Z_p^3: primes, index tables and canonical projective points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Tuple

import numpy as np

GroupPoint = Tuple[int, int, int]
ProjPoint = Tuple[int, int, int]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Prime(int):
    """An int that is known to be prime."""

    def __new__(cls, value):
        if isinstance(value, Prime):
            return value
        if isinstance(value, bool) or int(value) != value:
            raise ValueError(f"modulus must be an integer, got {value!r}")
        value = int(value)
        if not is_prime(value):
            raise ValueError(f"{value} is not prime")
        return super().__new__(cls, value)


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def canonical(x, p: int) -> ProjPoint:
    """Scale a nonzero vector so that its first nonzero coordinate is 1."""
    x = tuple(int(c) % p for c in x)
    if len(x) != 3:
        raise ValueError(f"expected 3 coordinates, got {len(x)}")
    for c in x:
        if c:
            s = inv_mod(c, p)
            return tuple((s * v) % p for v in x)  # type: ignore[return-value]
    raise ValueError("the zero vector has no projective point")


def index_of(x, p: int) -> int:
    return int(x[0]) % p + p * (int(x[1]) % p) + p * p * (int(x[2]) % p)


def point_of(i: int, p: int) -> GroupPoint:
    return (i % p, (i // p) % p, i // (p * p))


@dataclass(frozen=True)
class Tables:
    """Precomputed lookup tables for Z_p^3 with the flat index x1 + p*x2 + p^2*x3."""

    p: int
    coords: np.ndarray  # (N, 3)
    dot: np.ndarray  # (N, N), <x, y> mod p
    sub: np.ndarray  # (N, N), index of x - y
    add: np.ndarray  # (N, N), index of x + y
    neg: np.ndarray  # (N,)
    scale: np.ndarray  # (p, N), index of lam * x
    proj_points: tuple  # canonical points, lexicographic
    proj_index: np.ndarray  # (N,), projective index of x, -1 at the origin

    @property
    def size(self) -> int:
        return self.p ** 3


@lru_cache(maxsize=None)
def tables(p: int) -> Tables:
    p = int(Prime(p))
    n = p ** 3
    idx = np.arange(n)
    coords = np.stack([idx % p, (idx // p) % p, idx // (p * p)], axis=1)
    # int16 keeps the N x N tables small at p = 13
    dot = ((coords @ coords.T) % p).astype(np.int16)

    def flat(c):
        c = c % p
        return c[..., 0] + p * c[..., 1] + p * p * c[..., 2]

    sub = flat(coords[:, None, :] - coords[None, :, :]).astype(np.int16)
    add = flat(coords[:, None, :] + coords[None, :, :]).astype(np.int16)
    neg = flat(-coords)
    scale = np.stack([flat(lam * coords) for lam in range(p)])
    pts = sorted({canonical(c, p) for c in coords[1:]})
    where = {pt: k for k, pt in enumerate(pts)}
    proj_index = np.full(n, -1, dtype=np.int64)
    for i in range(1, n):
        proj_index[i] = where[canonical(coords[i], p)]
    for arr in (coords, dot, sub, add, neg, scale, proj_index):
        arr.setflags(write=False)
    return Tables(p, coords, dot, sub, add, neg, scale, tuple(pts), proj_index)


def exact_matvec(mat: np.ndarray, values) -> list:
    """mat @ values for a small-integer matrix and rational values, exactly.

    Values are put over a common denominator so the product is an int64
    matmul; Python ints are used only when the result could overflow.
    """
    values = list(values)
    den = math.lcm(*(Fraction(v).denominator for v in values)) if values else 1
    ints = [int(v * den) for v in values]
    bound = max((abs(v) for v in ints), default=0) * len(ints) * int(np.abs(mat).max(initial=0))
    if bound < 2 ** 62:
        out = (mat.astype(np.int64) @ np.array(ints, dtype=np.int64)).tolist()
    else:
        out = list(mat.astype(object).dot(np.array(ints, dtype=object)))
    if den == 1:
        return out
    return [Fraction(v, den) for v in out]
