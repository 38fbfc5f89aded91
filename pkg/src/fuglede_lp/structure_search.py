"""Budgeted searches for spectra and tiling complements in Z_p^3.

A spectrum B of A (normalised so that 0 is in B) is a clique of size |A| in
the Cayley graph whose connection set is the lifted zero set of 1_A-hat, so
:func:`find_spectrum` is a maximum-clique branch and bound with a greedy
colouring bound.  Tiling complements come from an exact cover of Z_p^3 by
translates of A.  Searches that run out of budget say so.
"""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._field import Prime, tables
from .delsarte import spectral_exclusion_threshold
from .projective_plane import ProjSet, is_blocking
from .zp3_fourier import GroupSet, check_spectral_pair, zero_set, zero_set_mask

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = 2_000_000
    time_limit: float = 60.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.time_limit <= 0:
            raise ValueError("search budgets must be positive")


@dataclass(frozen=True)
class SearchOutcome:
    status: str
    witness: Optional[GroupSet] = None
    nodes: int = 0

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": None if self.witness is None else [list(x) for x in self.witness.elements()],
            "nodes": self.nodes,
        }


class _OutOfBudget(Exception):
    pass


class _Counter:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _clique_of_size(adj: list[int], candidates: int, target: int, counter: _Counter) -> Optional[list[int]]:
    """The lexicographically least clique of ``target`` vertices in ``candidates``.

    Vertices are tried in increasing order and each branch only extends by
    larger vertices; a greedy colouring of the remaining candidates bounds
    the clique size that is still reachable.
    """
    if target == 0:
        return []

    def colours(P: int) -> int:
        c = 0
        while P:
            c += 1
            Q = P
            while Q:
                v = (Q & -Q).bit_length() - 1
                Q &= ~adj[v] & ~(1 << v)
                P &= ~(1 << v)
        return c

    def expand(chosen: list[int], P: int) -> Optional[list[int]]:
        counter.tick()
        if len(chosen) + colours(P) < target:
            return None
        while P:
            if len(chosen) + P.bit_count() < target:
                return None
            v = (P & -P).bit_length() - 1
            P &= ~(1 << v)
            chosen.append(v)
            if len(chosen) == target:
                return chosen
            found = expand(chosen, P & adj[v])
            if found is not None:
                return found
            chosen.pop()
        return None

    return expand([], candidates)


def find_spectrum(A: GroupSet, budget: SearchBudget = SearchBudget()) -> SearchOutcome:
    """Search for B with 0 in B, |B| = |A| and B - B inside the zero set of 1_A-hat.

    The reported B is the lexicographically least such set (by flat index).
    """
    p = A.p
    n = len(A)
    if n == 0:
        return SearchOutcome(YES, GroupSet.empty(p))
    allowed = zero_set_mask(A)
    verts = [int(v) for v in np.flatnonzero(allowed)]
    sub = tables(p).sub
    adj = []
    for v in verts:
        row = 0
        for u in np.flatnonzero(allowed[sub[v, verts]]):
            row |= 1 << int(u)
        adj.append(row)
    counter = _Counter(budget)
    try:
        clique = _clique_of_size(adj, (1 << len(verts)) - 1, n - 1, counter)
    except _OutOfBudget:
        return SearchOutcome(INCONCLUSIVE, None, counter.nodes)
    if clique is None:
        return SearchOutcome(NO, None, counter.nodes)
    B = GroupSet.from_indices(p, [0] + [verts[k] for k in clique])
    assert check_spectral_pair(A, B)
    return SearchOutcome(YES, B, counter.nodes)


def tiles_with(A: GroupSet, T: GroupSet) -> bool:
    """1_A * 1_T == 1 on Z_p^3."""
    if A.p != T.p:
        raise ValueError(f"mismatched moduli {A.p} and {T.p}")
    sums = tables(A.p).add[np.ix_(A.indices(), T.indices())].ravel()
    counts = np.bincount(sums, minlength=A.p ** 3)
    return bool(np.all(counts == 1))


def is_tile(A: GroupSet, budget: SearchBudget = SearchBudget()) -> SearchOutcome:
    """Search for T with A (+) T = Z_p^3 by exact cover over translates of A.

    The empty set is reported as a degenerate tile without a witness.
    """
    p = A.p
    N = p ** 3
    n = len(A)
    if n == 0:
        return SearchOutcome(YES, None)
    if N % n:
        return SearchOutcome(NO)
    add = tables(p).add
    idx = A.indices()
    shapes: dict[int, int] = {}
    for t in range(N):
        m = 0
        for c in add[idx, t]:
            m |= 1 << int(c)
        shapes.setdefault(m, t)
    options = list(shapes.items())
    by_cell: list[list[int]] = [[] for _ in range(N)]
    for k, (m, _) in enumerate(options):
        for c in _bits(m):
            by_cell[c].append(k)
    full = (1 << N) - 1
    counter = _Counter(budget)
    chosen: list[int] = []

    def search(covered: int) -> bool:
        counter.tick()
        if covered == full:
            return True
        best, best_opts = None, None
        for c in _bits(full & ~covered):
            opts = [k for k in by_cell[c] if not options[k][0] & covered]
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = c, opts
                if len(opts) <= 1:
                    break
        for k in best_opts:
            chosen.append(k)
            if search(covered | options[k][0]):
                return True
            chosen.pop()
        return False

    try:
        found = search(0)
    except _OutOfBudget:
        return SearchOutcome(INCONCLUSIVE, None, counter.nodes)
    if not found:
        return SearchOutcome(NO, None, counter.nodes)
    T = GroupSet.from_indices(p, [options[k][1] for k in chosen])
    assert tiles_with(A, T)
    return SearchOutcome(YES, T, counter.nodes)


def spectrum_of_tile(A: GroupSet, T: GroupSet) -> GroupSet:
    """Spectrum of a nontrivial tile, built as in the proof that tiles are spectral.

    |A| = p: the line through the first zero of 1_A-hat.
    |A| = p^2: the plane orthogonal to t1 - t0, for the first two elements of T.
    """
    p = A.p
    if not tiles_with(A, T):
        raise ValueError("A (+) T is not a tiling of Z_p^3")
    n = len(A)
    if n == p:
        zs = sorted(zero_set(A))
        if not zs:
            raise RuntimeError("a tile of size p must have a zero of its transform")
        return GroupSet.line(p, zs[0])
    if n == p * p:
        t0, t1 = T.elements()[:2]
        d = tuple((b - a) % p for a, b in zip(t0, t1))
        return GroupSet.plane(p, d)
    raise ValueError(f"trivial tile of size {n}: nothing to construct")


# --------------------------------------------------------------------------
# necessary conditions


@dataclass(frozen=True)
class CharspecReport:
    p: int
    size: int
    trivial: bool
    divisible: bool
    k: Optional[int]
    zero_set_size: int
    zero_set_blocking: Optional[bool]
    threshold_excluded: bool
    charspec_ok: bool
    certified_non_spectral: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_charspec(A: GroupSet) -> CharspecReport:
    """Necessary conditions for spectrality of A.

    A nontrivial spectral set has |A| = pk with 1 <= k <= p and a nonempty zero
    set; when 1 < k < p its projectivised zero set must be a blocking set.
    Failing any of these, or landing in the excluded cardinality window,
    certifies that A is not spectral.
    """
    p = A.p
    size = len(A)
    zs = zero_set(A)
    trivial = size in (0, 1, p ** 3)
    divisible = size % p == 0
    k = size // p if divisible else None
    blocking = None
    if k is not None and 1 < k < p:
        blocking = is_blocking(ProjSet(p, zs), 1)
    if trivial:
        ok = True
    else:
        ok = divisible and 1 <= k <= p and len(zs) > 0 and blocking is not False
    excluded = not trivial and spectral_exclusion_threshold(p, 1).contains(size)
    return CharspecReport(p, size, trivial, divisible, k, len(zs), blocking, excluded, ok,
                          (not ok) or excluded)


# --------------------------------------------------------------------------
# exhaustive concordance


@dataclass
class FugledeReport:
    p: int
    rows: list = field(default_factory=list)  # (set_id, size, spectral, tile)
    seconds: float = 0.0

    @property
    def discrepancies(self) -> list:
        return [r for r in self.rows if INCONCLUSIVE not in r[2:] and r[2] != r[3]]

    @property
    def inconclusive(self) -> list:
        return [r for r in self.rows if INCONCLUSIVE in r[2:]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["set-id", "size", "spectral", "tile"])
        w.writerows(self.rows)
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "p": self.p,
            "sets": len(self.rows),
            "discrepancies": len(self.discrepancies),
            "inconclusive": len(self.inconclusive),
            "seconds": round(self.seconds, 3),
        }


def _subgroups(p: int) -> list[GroupSet]:
    pts = tables(p).proj_points
    return [GroupSet.line(p, x) for x in pts] + [GroupSet.plane(p, x) for x in pts]


def exhaustive_fuglede_check(p: int = 2, budget: SearchBudget = SearchBudget(),
                             samples: int = 200, seed: int = 0) -> FugledeReport:
    """Classify subsets as spectral and/or tile.

    p = 2: every one of the 256 subsets, identified by its bit mask.
    p = 3: all lines and planes through the origin plus ``samples`` random
    subsets drawn with ``seed``; ids are ``sub-<n>`` and ``rnd-<n>``.
    """
    p = Prime(p)
    start = time.monotonic()
    report = FugledeReport(int(p))
    if p == 2:
        family = [(str(m), GroupSet(2, [(m >> i) & 1 for i in range(8)])) for m in range(256)]
    elif p == 3:
        rng = np.random.default_rng(seed)
        family = [(f"sub-{i}", S) for i, S in enumerate(_subgroups(3))]
        for i in range(samples):
            size = int(rng.integers(0, 28))
            family.append((f"rnd-{i}", GroupSet.from_indices(3, rng.choice(27, size, replace=False))))
    else:
        raise ValueError("exhaustive checks support p = 2 (all subsets) and p = 3 (sampled)")
    for set_id, A in family:
        spec = find_spectrum(A, budget).status
        tile = is_tile(A, budget).status
        report.rows.append((set_id, len(A), spec, tile))
    report.seconds = time.monotonic() - start
    return report
