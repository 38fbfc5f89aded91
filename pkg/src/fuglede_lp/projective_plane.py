"""Incidence geometry of PG(2, p) and (t-fold) blocking sets.

Points are canonical triples whose first nonzero coordinate is 1.  The line
P^perp is stored by its dual point P.  The extra point O (the image of the
origin of Z_p^3) is never a point of the plane; sets carry it as a flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from ._field import Prime, ProjPoint, canonical, tables
from .zp3_fourier import GroupSet

BRUTEFORCE_MAX_P = 3


@dataclass(frozen=True)
class _Plane:
    p: int
    points: tuple
    index: dict
    incidence: np.ndarray  # incidence[i, j]: point j lies on the line dual to point i
    line_masks: tuple  # bit masks of the lines, for subset enumeration

    @property
    def size(self) -> int:
        return len(self.points)


@lru_cache(maxsize=None)
def plane(p: int) -> _Plane:
    p = int(Prime(p))
    pts = enumerate_points(p)
    arr = np.array(pts)
    inc = (arr @ arr.T) % p == 0
    inc.setflags(write=False)
    masks = tuple(sum(1 << j for j in np.flatnonzero(row)) for row in inc)
    return _Plane(p, tuple(pts), {pt: i for i, pt in enumerate(pts)}, inc, masks)


def enumerate_points(p: int) -> list[ProjPoint]:
    """The p^2 + p + 1 canonical points, in lexicographic order."""
    p = Prime(p)
    pts = [(0, 0, 1)]
    pts += [(0, 1, c) for c in range(p)]
    pts += [(1, b, c) for b in range(p) for c in range(p)]
    return pts


@dataclass(frozen=True)
class ProjLine:
    """The line P^perp, recorded by its dual point P."""

    p: int
    dual: ProjPoint

    @property
    def points(self) -> list[ProjPoint]:
        pl = plane(self.p)
        return [pl.points[j] for j in np.flatnonzero(pl.incidence[pl.index[self.dual]])]

    def __contains__(self, q) -> bool:
        return sum(a * b for a, b in zip(self.dual, q)) % self.p == 0

    def __len__(self) -> int:
        return self.p + 1


def dual_line(P: Sequence[int], p: int) -> ProjLine:
    if all(c % p == 0 for c in P):
        raise ValueError("O has no dual line")
    return ProjLine(int(Prime(p)), canonical(P, p))


def lines(p: int) -> list[ProjLine]:
    return [ProjLine(int(p), pt) for pt in plane(p).points]


@dataclass(frozen=True)
class ProjSet:
    """A subset of PG(2, p), optionally together with O."""

    p: int
    points: frozenset
    contains_O: bool = False

    def __post_init__(self):
        p = int(Prime(self.p))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "points", frozenset(canonical(x, p) for x in self.points))

    @classmethod
    def from_mask(cls, p: int, mask, contains_O: bool = False) -> "ProjSet":
        pl = plane(p)
        return cls(p, frozenset(pl.points[j] for j in np.flatnonzero(mask)), contains_O)

    @classmethod
    def full(cls, p: int) -> "ProjSet":
        return cls(p, frozenset(plane(p).points))

    @property
    def mask(self) -> np.ndarray:
        pl = plane(self.p)
        m = np.zeros(pl.size, dtype=bool)
        m[[pl.index[x] for x in self.points]] = True
        return m

    def sorted_points(self) -> list[ProjPoint]:
        return sorted(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, x) -> bool:
        return canonical(x, self.p) in self.points

    def complement(self) -> "ProjSet":
        """PG(2, p) minus the set; the O flag is carried over unchanged."""
        return ProjSet(self.p, frozenset(plane(self.p).points) - self.points, self.contains_O)

    def without_O(self) -> "ProjSet":
        return ProjSet(self.p, self.points, False)

    def line_counts(self) -> np.ndarray:
        """|S cap P^perp| for every line, indexed like the plane's points."""
        return plane(self.p).incidence[:, self.mask].sum(axis=1)

    def lift(self) -> GroupSet:
        """The union of the punctured lines of the set (plus 0 when O is present)."""
        t = tables(self.p)
        inside = np.append(self.mask, self.contains_O)
        return GroupSet(self.p, inside[t.proj_index])

    def to_json(self) -> dict:
        return {"p": self.p, "points": [list(x) for x in self.sorted_points()], "contains_O": self.contains_O}

    @classmethod
    def from_json(cls, data) -> "ProjSet":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(data["p"], frozenset(tuple(x) for x in data["points"]), bool(data.get("contains_O", False)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed projective set JSON: {exc}") from exc


def projectivize(D: GroupSet) -> ProjSet:
    """Collapse a union of lines through the origin to points of PG(2, p)."""
    t = tables(D.p)
    proj = t.proj_index[1:]
    hit = D.mask[1:]
    n = len(t.proj_points)
    inside = np.bincount(proj[hit], minlength=n)
    if not np.all((inside == 0) | (inside == D.p - 1)):
        raise ValueError("not balanced: the set is not a union of lines through the origin")
    return ProjSet.from_mask(D.p, inside > 0, contains_O=bool(D.mask[0]))


def is_blocking(S: ProjSet, t: int = 1) -> bool:
    """Every line meets S in at least t and at most p points."""
    if t < 1:
        raise ValueError("t must be a positive integer")
    if S.contains_O:
        raise ValueError("blocking sets live in PG(2, p); drop O first")
    counts = S.line_counts()
    return bool(np.all((counts >= t) & (counts <= S.p)))


def minimalize(S: ProjSet, t: int = 1) -> ProjSet:
    """Greedily delete points while the set stays t-fold blocking.

    Points are scanned in canonical order; after every deletion the scan starts
    over, so the result depends only on S and t.
    """
    if not is_blocking(S, t):
        raise ValueError(f"input is not a {t}-fold blocking set")
    pl = plane(S.p)
    inside = S.mask.copy()
    counts = S.line_counts()
    while True:
        for j in np.flatnonzero(inside):
            through = pl.incidence[j]
            if counts[through].min() > t:
                inside[j] = False
                counts[through] -= 1
                break
        else:
            return ProjSet.from_mask(S.p, inside)


def is_minimal(S: ProjSet, t: int = 1) -> bool:
    if not is_blocking(S, t):
        return False
    pl = plane(S.p)
    counts = S.line_counts()
    return all(counts[pl.incidence[pl.index[x]]].min() <= t for x in S.points)


def min_blocking_size_bruteforce(p: int, t: int = 1) -> Optional[int]:
    """Smallest t-fold blocking set by exhaustive search (p <= 3 only)."""
    p = Prime(p)
    if p > BRUTEFORCE_MAX_P:
        raise ValueError(f"exhaustive search is limited to p <= {BRUTEFORCE_MAX_P}")
    if t < 1:
        raise ValueError("t must be a positive integer")
    pl = plane(p)
    masks = pl.line_masks
    for size in range(pl.size + 1):
        for combo in combinations(range(pl.size), size):
            s = sum(1 << j for j in combo)
            if all(t <= bin(s & m).count("1") <= p for m in masks):
                return size
    return None


def size_bounds_hold(p: int, size: int, minimal: bool = False) -> bool:
    """3(p+1)/2 <= size <= p^2 - p/2 - 1/2, and size < p sqrt(p) + 1 if minimal.

    All comparisons are on integers: the last one is (size - 1)^2 < p^3.
    """
    ok = 2 * size >= 3 * (p + 1) and 2 * size <= 2 * p * p - p - 1
    if minimal:
        ok = ok and (size < 1 or (size - 1) ** 2 < p ** 3)
    return ok


def verify_size_bounds(S: ProjSet, minimal: bool = False) -> bool:
    return size_bounds_hold(S.p, len(S), minimal)


def tfold_minimal_upper_bound_holds(p: int, size: int) -> bool:
    """size <= p sqrt(3p - 5) + p, the known bound for minimal 3-fold blocking sets."""
    return size <= p or (size - p) ** 2 <= p * p * (3 * p - 5)


def projective_triangle(p: int) -> ProjSet:
    """The projective triangle of size 3(p+1)/2 (p odd): a minimal blocking set.

    Vertices of the reference triangle plus, on each side, the points whose
    nonzero ratio is minus a nonzero square.
    """
    p = Prime(p)
    if p == 2:
        raise ValueError("PG(2, 2) has no blocking sets")
    squares = sorted({(s * s) % p for s in range(1, p)})
    pts = {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
    for s in squares:
        pts |= {(0, 1, -s), (-s, 0, 1), (1, -s, 0)}
    return ProjSet(p, frozenset(pts))


def random_blocking_set(p: int, rng: np.random.Generator, t: int = 1, density: float = 0.5,
                        max_tries: int = 100000) -> ProjSet:
    """Rejection-sample a t-fold blocking set with i.i.d. point membership."""
    n = plane(p).size
    for _ in range(max_tries):
        S = ProjSet.from_mask(p, rng.random(n) < density)
        if is_blocking(S, t):
            return S
    raise RuntimeError("no blocking set sampled; adjust density")


def random_minimal_blocking_set(p: int, rng: np.random.Generator, t: int = 1,
                                max_tries: int = 1000) -> ProjSet:
    """Greedy deletion from the whole plane in a random order.

    A point is dropped when every line through it keeps more than t points.
    The first pass visits the lines in random order and opens each one that
    is still full; the second pass runs over all points, so the survivor is
    minimal.  Draws that still contain a full line are retried.
    """
    if t < 1:
        raise ValueError("t must be a positive integer")
    pl = plane(p)
    for _ in range(max_tries):
        inside = np.ones(pl.size, dtype=bool)
        counts = np.full(pl.size, p + 1)

        def drop(j):
            through = pl.incidence[j]
            if inside[j] and counts[through].min() > t:
                inside[j] = False
                counts[through] -= 1
                return True
            return False

        for line in rng.permutation(pl.size):
            if counts[line] > p:
                for j in rng.permutation(np.flatnonzero(pl.incidence[line])):
                    if drop(j):
                        break
        for j in rng.permutation(pl.size):
            drop(j)
        if counts.max() <= p:
            return ProjSet.from_mask(p, inside)
    raise RuntimeError(f"no {t}-fold blocking set found in PG(2, {p})")


def smallest_minimalized(p: int, rng: np.random.Generator, starts: int = 20, t: int = 1) -> ProjSet:
    """Smallest of ``starts`` minimal t-fold blocking sets from random greedy deletion.

    Ties go to the first one found, so the answer is fixed by the generator state.
    """
    if starts < 1:
        raise ValueError("need at least one start")
    best = None
    for _ in range(starts):
        S = random_minimal_blocking_set(p, rng, t)
        if best is None or len(S) < len(best):
            best = S
    return best
