"""Optimal balanced witness functions by exact linear programming.

Variables are h(O) followed by h(P) for the points of PG(2, p) in canonical
order.  The program is

    minimise   h(O)
    subject to hhat(Q) >= 0      for Q in PG(2, p) u {O}
               hhat(O) = 1
               h(P) <= 0         for P in Z   (h(P) = 0 if negatives are off)

so the optimum times p^3 is the best Delsarte bound available for sets whose
differences may only use directions in Z.

Balanced functions satisfy hhat-hat = p^3 h, so the solver works with the
transform g = hhat instead: g >= 0 becomes a plain sign bound, g(O) = 1 is
substituted away, and only the |Z| sign conditions on h remain.  The
objective is then h(O) = (1 + (p - 1) sum_Q g(Q)) / p^3.  What is actually
pivoted on is the dual of that program (one variable u_P per P in Z),

    maximise   sum_P u_P
    subject to sum_P (1 - p [Q on P^perp]) u_P <= 1   for every Q

whose origin is feasible, so no phase 1 is needed; g is read off the
multipliers of its rows.  A floating point solve (HiGHS) supplies the
starting basis; the exact simplex then finishes and proves optimality.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import linprog

from . import simplex
from .delsarte import BalancedFunction, excluded_cardinalities, proj_fourier
from .projective_plane import ProjSet, plane


@dataclass(frozen=True)
class WitnessLP:
    p: int
    forbidden_Z: ProjSet
    allow_negative_on_Z: bool = True

    def __post_init__(self):
        if self.forbidden_Z.p != self.p:
            raise ValueError("forbidden set lives in a different plane")
        if self.forbidden_Z.contains_O:
            raise ValueError("the forbidden set must lie in PG(2, p)")

    @property
    def n_variables(self) -> int:
        return plane(self.p).size + 1

    @property
    def n_constraints(self) -> int:
        return plane(self.p).size + 1 + len(self.forbidden_Z) + 1

    def transform_rows(self) -> list[list[int]]:
        """Coefficients of hhat(O), hhat(Q_0), hhat(Q_1), ... in the variables."""
        p = self.p
        pl = plane(p)
        rows = [[1] + [p - 1] * pl.size]
        for i in range(pl.size):
            rows.append([1] + [p * int(b) - 1 for b in pl.incidence[i]])
        return rows

    def bounds(self) -> list[str]:
        on_Z = simplex.NONPOS if self.allow_negative_on_Z else simplex.ZERO
        mask = self.forbidden_Z.mask
        return [simplex.FREE] + [on_Z if z else simplex.FREE for z in mask]

    def to_json(self) -> dict:
        return {"p": self.p, "forbidden_Z": self.forbidden_Z.to_json(),
                "allow_negative_on_Z": self.allow_negative_on_Z}

    @classmethod
    def from_json(cls, data) -> "WitnessLP":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            Z = ProjSet.from_json(data["forbidden_Z"])
            return cls(int(data.get("p", Z.p)), Z, bool(data.get("allow_negative_on_Z", True)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed LP spec JSON: {exc}") from exc


@dataclass(frozen=True)
class LPSolution:
    status: str
    witness: Optional[BalancedFunction]
    objective: Optional[Fraction]
    certified: bool = False
    pivots: int = 0

    @property
    def bound(self) -> Optional[Fraction]:
        if self.objective is None or self.witness is None:
            return None
        return self.witness.p ** 3 * self.objective

    def excluded_k(self) -> list[int]:
        if not self.certified or self.bound is None:
            return []
        return excluded_cardinalities(self.witness.p, self.bound)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "objective": None if self.objective is None else str(self.objective),
            "bound": None if self.bound is None else str(self.bound),
            "certified": self.certified,
            "excluded_k": self.excluded_k(),
            "pivots": self.pivots,
            "witness": None if self.witness is None else self.witness.to_json(),
        }

    @classmethod
    def from_json(cls, data) -> "LPSolution":
        try:
            w = data.get("witness")
            obj = data.get("objective")
            return cls(
                data["status"],
                None if w is None else BalancedFunction.from_json(w),
                None if obj is None else Fraction(obj),
                bool(data.get("certified", False)),
                int(data.get("pivots", 0)),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed LP solution JSON: {exc}") from exc


def _float_start(rows, kind) -> Optional[list]:
    n = len(rows[0])
    lo = 0 if kind == simplex.NONNEG else None
    res = linprog(-np.ones(n), A_ub=np.array(rows, dtype=float), b_ub=np.ones(len(rows)),
                  bounds=[(lo, None)] * n, method="highs")
    return list(res.x) if res.status == 0 else None


def optimize_witness(spec: WitnessLP, max_pivots: Optional[int] = None) -> LPSolution:
    """Solve the witness LP exactly and certify the answer."""
    p = spec.p
    pl = plane(p)
    Z = [int(j) for j in np.flatnonzero(spec.forbidden_Z.mask)]
    if Z:
        rows = [[1 - p * int(pl.incidence[q, j]) for j in Z] for q in range(pl.size)]
        kind = simplex.NONNEG if spec.allow_negative_on_Z else simplex.FREE
        res = simplex.minimize([-1] * len(Z), rows, [1] * pl.size, bounds=[kind] * len(Z),
                               max_pivots=max_pivots, warm_start=_float_start(rows, kind))
        if res.status == "unbounded":
            return LPSolution("infeasible", None, None, False, res.pivots)
        g, pivots = [-y for y in res.duals], res.pivots
    else:
        g, pivots = [0] * pl.size, 0
    witness = proj_fourier(BalancedFunction(p, 1, g)) * Fraction(1, p ** 3)
    sol = LPSolution("optimal", witness, witness.value_at_O, False, pivots)
    return replace(sol, certified=verify_certificate(sol, spec))


def verify_certificate(sol: LPSolution, spec: WitnessLP) -> bool:
    """Re-substitute the witness into every constraint with exact arithmetic."""
    h = sol.witness
    if sol.status != "optimal" or h is None or sol.objective is None:
        return False
    if h.p != spec.p:
        return False
    ht = proj_fourier(h)
    if ht.value_at_O != 1 or any(v < 0 for v in ht.values):
        return False
    for v, z in zip(h.values, spec.forbidden_Z.mask):
        if z and (v > 0 or (not spec.allow_negative_on_Z and v != 0)):
            return False
    return h.value_at_O == sol.objective
