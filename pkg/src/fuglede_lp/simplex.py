"""Exact two-phase simplex over the rationals.

The tableau is kept fraction-free: every entry is an integer and the true
tableau is ``M / det`` where ``det`` is the determinant of the current basis
(integer pivoting, as in Edmonds' and Bareiss' elimination).  The entering
column is the most negative reduced cost (lowest index on ties); after a
run of degenerate pivots the method switches to Bland's rule until the
objective moves again, so it terminates.  Ties in the ratio test go to the
lowest basic index, and the pivot sequence depends only on the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

FREE, NONNEG, NONPOS, ZERO = "free", "nonneg", "nonpos", "zero"


STALL_LIMIT = 50


class PivotLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[list]
    objective: Optional[Fraction]
    pivots: int
    # multipliers of the A_ub rows (all <= 0), when every b_ub >= 0 and there are no equalities
    duals: Optional[list] = None


def _integer_scale(coeffs) -> int:
    return math.lcm(*(Fraction(v).denominator for v in coeffs), 1)


def _integer_row(coeffs, rhs) -> tuple[list, int]:
    """Scale a rational row to integers (positive factor)."""
    vals = [Fraction(v) for v in coeffs] + [Fraction(rhs)]
    den = math.lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    return ints[:-1], ints[-1]


class _Tableau:
    def __init__(self, M: np.ndarray, basis: list, max_pivots: Optional[int]):
        self.M = M  # last row is the objective row, last column the rhs
        self.basis = basis
        self.det = 1
        self.pivots = 0
        self.max_pivots = max_pivots

    def pivot(self, r: int, s: int) -> None:
        if self.max_pivots is not None and self.pivots >= self.max_pivots:
            raise PivotLimitExceeded(f"more than {self.max_pivots} pivots")
        M = self.M
        a = M[r, s]
        row = M[r].copy()
        M[:] = (a * M - np.outer(M[:, s], row)) // self.det
        M[r] = row
        self.det = a
        if a < 0:
            self.M = -M
            self.det = -a
        self.basis[r] = s
        self.pivots += 1

    def entering(self, allowed: int, bland: bool) -> Optional[int]:
        z = self.M[-1, :allowed]
        neg = np.flatnonzero(z < 0)
        if len(neg) == 0:
            return None
        if bland:
            return int(neg[0])
        return int(neg[np.argmin(z[neg])])

    def leaving(self, s: int) -> Optional[int]:
        M = self.M
        best = None
        for i in range(M.shape[0] - 1):
            a = M[i, s]
            if a > 0:
                if best is None:
                    best = i
                    continue
                lhs = M[i, -1] * M[best, s]
                rhs = M[best, -1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
        return best

    def run(self, allowed: int) -> str:
        stalled = 0
        while True:
            s = self.entering(allowed, stalled >= STALL_LIMIT)
            if s is None:
                return "optimal"
            r = self.leaving(s)
            if r is None:
                return "unbounded"
            degenerate = self.M[r, -1] == 0
            self.pivot(r, s)
            stalled = stalled + 1 if degenerate else 0


def _warm(tab: _Tableau, cols, rows, x0) -> Optional[_Tableau]:
    """Pivot the support of x0 into a copy of the slack basis; None if infeasible."""
    x0 = [float(v) for v in x0]
    scale = max([1.0] + [abs(v) for v in x0])
    tol = 1e-9 * scale
    col_val = [sg * x0[j] for j, sg in cols]
    slack = [float(rhs) - sum(float(a) * v for a, v in zip(coeffs, col_val)) for coeffs, rhs, _ in rows]
    t = _Tableau(tab.M.copy(), list(tab.basis), tab.max_pivots)
    n_struct = len(cols)
    order = sorted(range(len(rows)), key=lambda i: (abs(slack[i]), i))
    for k, v in enumerate(col_val):
        if v <= tol:
            continue
        for r in order:
            if t.basis[r] >= n_struct and t.M[r, k] != 0:
                t.pivot(r, k)
                break
    if any(t.M[i, -1] < 0 for i in range(t.M.shape[0] - 1)):
        return None
    return t


def minimize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    bounds: Optional[Sequence[str]] = None,
    max_pivots: Optional[int] = None,
    warm_start: Optional[Sequence[float]] = None,
) -> LPResult:
    """Minimize c.x subject to A_ub x <= b_ub, A_eq x = b_eq and sign bounds.

    ``bounds[j]`` is one of "free", "nonneg", "nonpos", "zero" (default nonneg).
    All data may be ints or Fractions; the answer is exact.

    ``warm_start`` is an approximate optimum (e.g. from a floating point
    solver).  It is only used when the origin is feasible: the columns it
    makes nonzero are pivoted in at the rows it makes tight, and if that
    basis turns out infeasible the solve starts over from the slack basis.
    Either way the simplex runs to exact optimality afterwards.
    """
    n = len(c)
    bounds = list(bounds) if bounds is not None else [NONNEG] * n
    if len(bounds) != n:
        raise ValueError("one bound per variable")

    # structural columns: (original variable, sign)
    cols: list[tuple[int, int]] = []
    for j, kind in enumerate(bounds):
        if kind == NONNEG:
            cols.append((j, 1))
        elif kind == NONPOS:
            cols.append((j, -1))
        elif kind == FREE:
            cols += [(j, 1), (j, -1)]
        elif kind != ZERO:
            raise ValueError(f"unknown bound {kind!r}")

    rows = []  # (coeffs over cols, rhs, kind) with rhs >= 0
    for a, b in zip(A_ub, b_ub):
        coeffs = [sg * Fraction(a[j]) for j, sg in cols]
        if Fraction(b) >= 0:
            rows.append((coeffs, Fraction(b), "slack"))
        else:
            rows.append(([-v for v in coeffs], -Fraction(b), "surplus"))
    for a, b in zip(A_eq, b_eq):
        coeffs = [sg * Fraction(a[j]) for j, sg in cols]
        if Fraction(b) >= 0:
            rows.append((coeffs, Fraction(b), "eq"))
        else:
            rows.append(([-v for v in coeffs], -Fraction(b), "eq"))

    m = len(rows)
    n_struct = len(cols)
    n_aux = sum(1 for r in rows if r[2] != "eq")
    n_art = sum(1 for r in rows if r[2] != "slack")
    width = n_struct + n_aux + n_art
    M = np.zeros((m + 1, width + 1), dtype=object)
    basis = [0] * m
    aux = n_struct
    art = n_struct + n_aux
    art_rows = []
    for i, (coeffs, rhs, kind) in enumerate(rows):
        ints, b = _integer_row(coeffs, rhs)
        M[i, :n_struct] = ints
        M[i, -1] = b
        if kind == "slack":
            M[i, aux] = 1
            basis[i] = aux
            aux += 1
        else:
            if kind == "surplus":
                M[i, aux] = -1
                aux += 1
            M[i, art] = 1
            basis[i] = art
            art_rows.append(i)
            art += 1

    tab = _Tableau(M, basis, max_pivots)
    first_art = n_struct + n_aux
    if warm_start is not None and not art_rows:
        tab = _warm(tab, cols, rows, warm_start) or _Tableau(M, list(basis), max_pivots)

    if art_rows:
        # phase 1: minimise the sum of artificials
        M[-1, :] = 0
        for i in art_rows:
            M[-1, :first_art] -= M[i, :first_art]
            M[-1, -1] -= M[i, -1]
        tab.run(first_art)
        if tab.M[-1, -1] != 0:
            return LPResult("infeasible", None, None, tab.pivots)
        # drive remaining artificials out of the basis, drop redundant rows
        i = 0
        while i < len(tab.basis):
            if tab.basis[i] >= first_art:
                nz = [j for j in range(first_art) if tab.M[i, j] != 0]
                if nz:
                    tab.pivot(i, nz[0])
                else:
                    tab.M = np.delete(tab.M, i, axis=0)
                    del tab.basis[i]
                    continue
            i += 1
        tab.M = np.delete(tab.M, np.s_[first_art:width], axis=1)

    # phase 2 objective row, scaled to integers
    cost, _ = _integer_row([sg * Fraction(c[j]) for j, sg in cols] + [0] * n_aux, 0)
    cb = [cost[b] for b in tab.basis]
    Mt = tab.M
    Mt[-1, :-1] = [cost[j] * tab.det for j in range(first_art)]
    Mt[-1, -1] = 0
    for i, w in enumerate(cb):
        if w:
            Mt[-1, :] -= w * Mt[i, :]
    status = tab.run(first_art)
    if status == "unbounded":
        return LPResult("unbounded", None, None, tab.pivots)

    col_val = [Fraction(0)] * first_art
    for i, b in enumerate(tab.basis):
        col_val[b] = Fraction(tab.M[i, -1], tab.det)
    x = [Fraction(0)] * n
    for k, (j, sg) in enumerate(cols):
        x[j] += sg * col_val[k]
    objective = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    duals = None
    if not art_rows:
        # reduced cost of slack i is -y_i; undo the integer scaling of the cost row
        scale = _integer_scale([sg * Fraction(c[j]) for j, sg in cols])
        duals = [-Fraction(tab.M[-1, n_struct + i], tab.det * scale) for i in range(m)]
    return LPResult("optimal", x, objective, tab.pivots, duals)
