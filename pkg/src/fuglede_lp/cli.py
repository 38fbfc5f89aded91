"""Command line front end.

Subcommands: analyze, blocking, witness, lp, thresholds, search, fuglede-check.
JSON reports carry the configuration that produced them; tables are CSV.
Exit codes: 0 ok, 2 bad input, 3 certificate failure, 4 bad search budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from ._field import Prime, tables
from .delsarte import (
    BalancedFunction,
    spectral_exclusion_threshold,
    tfold_witness,
    witness_report,
)
from .lp_witness import LPSolution, WitnessLP, optimize_witness, verify_certificate
from .projective_plane import (
    ProjSet,
    is_blocking,
    is_minimal,
    minimalize,
    projective_triangle,
    random_minimal_blocking_set,
    smallest_minimalized,
    tfold_minimal_upper_bound_holds,
    verify_size_bounds,
)
from .structure_search import (
    SearchBudget,
    exhaustive_fuglede_check,
    find_spectrum,
    is_tile,
    verify_charspec,
)
from .zp3_fourier import GroupSet, level_counts, zero_set

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_BUDGET = 0, 2, 3, 4
ENV_MAX_NODES = "FUGLEDE_LP_MAX_NODES"
ENV_TIME_LIMIT = "FUGLEDE_LP_TIME_LIMIT"


class InputError(Exception):
    pass


class BudgetError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    p: Optional[int] = None
    t: int = 1
    input: Optional[str] = None
    output: Optional[str] = None
    seed: int = 0
    max_nodes: Optional[int] = None
    time_limit: Optional[float] = None
    extra: dict = field(default_factory=dict)

    def budget(self) -> SearchBudget:
        try:
            return SearchBudget(self.max_nodes, self.time_limit)
        except (TypeError, ValueError) as exc:
            raise BudgetError(str(exc)) from exc

    def to_json(self) -> dict:
        d = asdict(self)
        d.update(d.pop("extra"))
        return d


def _default_budget(args) -> tuple[int, float]:
    """Command line flags win over environment variables, which win over defaults."""
    base = SearchBudget()
    nodes, limit = args.max_nodes, args.time_limit
    try:
        if nodes is None:
            nodes = int(os.environ.get(ENV_MAX_NODES, base.max_nodes))
        if limit is None:
            limit = float(os.environ.get(ENV_TIME_LIMIT, base.time_limit))
    except ValueError as exc:
        raise BudgetError(f"bad budget in environment: {exc}") from exc
    if nodes <= 0 or not limit > 0:
        raise BudgetError("search budgets must be positive")
    return nodes, limit


# --------------------------------------------------------------------------
# I/O


def _read_json(path: Optional[str]):
    if path is None:
        raise InputError("an input file is required")
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load(path, loader):
    data = _read_json(path)
    try:
        return loader(data)
    except (ValueError, TypeError, KeyError, AttributeError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def _emit_json(report: dict, path: Optional[str]) -> None:
    _emit(json.dumps(report, indent=2) + "\n", path)


def _proj_set(data) -> ProjSet:
    """A projective set, or the "set" field of a report that carries one."""
    if isinstance(data, dict) and "points" not in data and isinstance(data.get("set"), dict):
        data = data["set"]
    return ProjSet.from_json(data)


def _prime(p) -> int:
    try:
        return int(Prime(p))
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _ks(ks) -> str:
    return " ".join(str(k) for k in ks)


# --------------------------------------------------------------------------
# commands


def cmd_analyze(cfg: RunConfig) -> int:
    A = _load(cfg.input, GroupSet.from_json)
    p = A.p
    cfg.p = p
    budget = cfg.budget()
    size = len(A)
    zs = ProjSet(p, zero_set(A))
    report = {"config": cfg.to_json(), "size": size, "k": size // p if size % p == 0 else None}
    if size:
        report["level_counts"] = [
            {"direction": list(pt), "counts": list(level_counts(A, pt).counts)}
            for pt in tables(p).proj_points
        ]
    else:
        report["level_counts"] = []
    report["zero_set"] = zs.to_json()
    report["zero_set_blocking"] = is_blocking(zs, 1)
    report["charspec"] = verify_charspec(A).to_json()
    report["charspec_ok"] = report["charspec"]["charspec_ok"]
    spec = find_spectrum(A, budget)
    tile = is_tile(A, budget)
    report["spectral"] = spec.to_json()
    report["tile"] = tile.to_json()
    _emit_json(report, cfg.output)
    return EXIT_OK


def _blocking_source(cfg: RunConfig) -> ProjSet:
    if cfg.t < 1:
        raise InputError("t must be a positive integer")
    mode = cfg.extra["source"]
    if mode == "input":
        return _load(cfg.input, _proj_set)
    if cfg.p is None:
        raise InputError("--p is required without --input")
    p = _prime(cfg.p)
    if mode == "triangle":
        if p == 2:
            raise InputError("PG(2, 2) has no blocking sets")
        return projective_triangle(p)
    try:
        return random_minimal_blocking_set(p, np.random.default_rng(cfg.seed), cfg.t)
    except RuntimeError as exc:
        raise InputError(str(exc)) from exc


def cmd_blocking(cfg: RunConfig) -> int:
    S = _blocking_source(cfg)
    if S.contains_O:
        raise InputError("blocking sets live in PG(2, p); the set contains O")
    cfg.p = S.p
    t = cfg.t
    blocking = is_blocking(S, t)
    report = {
        "config": cfg.to_json(),
        "set": S.to_json(),
        "size": len(S),
        "blocking": blocking,
        "minimal": is_minimal(S, t),
        "size_bounds_hold": verify_size_bounds(S, minimal=is_minimal(S, t)) if t == 1 else None,
    }
    if t == 3:
        report["tfold_upper_bound_holds"] = tfold_minimal_upper_bound_holds(S.p, len(S))
    if cfg.extra.get("minimalize"):
        if not blocking:
            raise InputError(f"cannot minimalize: not a {t}-fold blocking set")
        M = minimalize(S, t)
        report["minimalized"] = {"set": M.to_json(), "size": len(M)}
    _emit_json(report, cfg.output)
    return EXIT_OK


def cmd_witness(cfg: RunConfig) -> int:
    if cfg.extra.get("function"):
        h = _load(cfg.extra["function"], BalancedFunction.from_json)
        E = _load(cfg.extra["allowed"], _proj_set) if cfg.extra.get("allowed") else None
        if E is not None and E.p != h.p:
            raise InputError("witness and allowed set live in different planes")
        witness = h
    else:
        S = _load(cfg.input, _proj_set)
        try:
            witness = tfold_witness(S, cfg.t)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        E = S.without_O()
    cfg.p = witness.p
    try:
        rep = witness_report(witness, E)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out = {"config": cfg.to_json(), "report": rep.to_json(), "witness": witness.to_json()}
    _emit_json(out, cfg.output)
    return EXIT_OK


def _lp_spec(cfg: RunConfig) -> WitnessLP:
    neg = not cfg.extra.get("no_negative", False)
    if cfg.extra.get("spec"):
        return _load(cfg.extra["spec"], WitnessLP.from_json)
    if cfg.extra.get("from_set"):
        A = _load(cfg.extra["from_set"], GroupSet.from_json)
        Z = ProjSet(A.p, zero_set(A)).complement()
        return WitnessLP(A.p, Z, neg)
    if cfg.input:
        Z = _load(cfg.input, _proj_set)
        try:
            return WitnessLP(Z.p, Z, neg)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError("give a forbidden set, --spec or --from-set")


def cmd_lp(cfg: RunConfig) -> int:
    spec = _lp_spec(cfg)
    cfg.p = spec.p
    if cfg.extra.get("verify"):
        data = _read_json(cfg.extra["verify"])
        try:
            sol = LPSolution.from_json(data.get("solution", data))
        except (ValueError, AttributeError) as exc:
            raise InputError(f"{cfg.extra['verify']}: {exc}") from exc
        ok = verify_certificate(sol, spec)
        _emit_json({"config": cfg.to_json(), "certified": ok}, cfg.output)
        return EXIT_OK if ok else EXIT_CERT
    sol = optimize_witness(spec)
    out = {"config": cfg.to_json(), "spec": spec.to_json(), "solution": sol.to_json()}
    _emit_json(out, cfg.output)
    if sol.status == "optimal" and not sol.certified:
        return EXIT_CERT
    return EXIT_OK


THRESHOLD_COLUMNS = [
    "p", "t1_lower", "t1_lower_approx", "t1_excluded_k",
    "t3_lower", "t3_lower_approx", "t3_excluded_k",
    "blocking_size", "section5_bound", "section5_excluded_k",
    "lp_bound", "lp_excluded_k", "lp_certified", "seed", "starts",
]


def threshold_row(p: int, seed: int = 0, starts: int = 20, lp: bool = True) -> dict:
    """One row of the thresholds table; every rational is printed exactly."""
    p = _prime(p)
    if p == 2:
        raise InputError("PG(2, 2) has no blocking sets")
    t1 = spectral_exclusion_threshold(p, 1)
    row = {"p": p, "t1_lower": str(t1.lower), "t1_lower_approx": f"{float(t1.lower):.4f}",
           "t1_excluded_k": _ks(t1.excluded_k())}
    if p >= 5:
        t3 = spectral_exclusion_threshold(p, 3)
        row.update(t3_lower=str(t3.lower), t3_lower_approx=f"{float(t3.lower):.4f}",
                   t3_excluded_k=_ks(t3.excluded_k()))
    else:
        row.update(t3_lower="", t3_lower_approx="", t3_excluded_k="")
    S = smallest_minimalized(p, np.random.default_rng(seed), starts)
    h = tfold_witness(S, 1)
    rep = witness_report(h, S)
    row.update(blocking_size=len(S), section5_bound=str(rep.bound), section5_excluded_k=_ks(rep.excluded_k))
    if lp:
        sol = optimize_witness(WitnessLP(p, S.complement()))
        row.update(lp_bound=str(sol.bound), lp_excluded_k=_ks(sol.excluded_k()), lp_certified=sol.certified)
    else:
        row.update(lp_bound="", lp_excluded_k="", lp_certified="")
    row.update(seed=seed, starts=starts)
    return row


def cmd_thresholds(cfg: RunConfig) -> int:
    primes = cfg.extra["primes"]
    for p in primes:
        _prime(p)
    starts = cfg.extra.get("starts", 20)
    if starts < 1:
        raise InputError("--starts must be positive")
    rows = [threshold_row(p, cfg.seed, starts, not cfg.extra.get("no_lp")) for p in primes]
    buf = io.StringIO()
    w = csv.DictWriter(buf, THRESHOLD_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), cfg.output)
    if any(r["lp_certified"] is False for r in rows):
        return EXIT_CERT
    return EXIT_OK


def cmd_search(cfg: RunConfig) -> int:
    A = _load(cfg.input, GroupSet.from_json)
    cfg.p = A.p
    budget = cfg.budget()
    what = cfg.extra.get("what", "both")
    out = {"config": cfg.to_json(), "size": len(A)}
    if what in ("spectrum", "both"):
        out["spectral"] = find_spectrum(A, budget).to_json()
    if what in ("tile", "both"):
        out["tile"] = is_tile(A, budget).to_json()
    _emit_json(out, cfg.output)
    return EXIT_OK


def cmd_fuglede_check(cfg: RunConfig) -> int:
    p = _prime(cfg.p if cfg.p is not None else 2)
    cfg.p = p
    if p not in (2, 3):
        raise InputError("fuglede-check supports p = 2 and p = 3")
    budget = cfg.budget()
    report = exhaustive_fuglede_check(p, budget, samples=cfg.extra.get("samples", 200), seed=cfg.seed)
    _emit(report.to_csv(), cfg.output)
    if cfg.extra.get("summary"):
        _emit_json({"config": cfg.to_json(), **report.summary()}, cfg.extra["summary"])
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "blocking": cmd_blocking,
    "witness": cmd_witness,
    "lp": cmd_lp,
    "thresholds": cmd_thresholds,
    "search": cmd_search,
    "fuglede-check": cmd_fuglede_check,
}


# --------------------------------------------------------------------------
# argument parsing


def _budget_flags(sp):
    sp.add_argument("--max-nodes", type=int, default=None,
                    help=f"search node budget (env {ENV_MAX_NODES}, default 2000000)")
    sp.add_argument("--time-limit", type=float, default=None,
                    help=f"search time budget in seconds (env {ENV_TIME_LIMIT}, default 60)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fuglede-lp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("analyze", help="zero set, level counts and verdicts for a set in Z_p^3")
    sp.add_argument("input", help="set JSON: {\"p\": 3, \"elements\": [[0,0,0], ...]}")
    sp.add_argument("-o", "--output")
    _budget_flags(sp)

    sp = sub.add_parser("blocking", help="check, generate or minimalize blocking sets")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="projective set JSON")
    src.add_argument("--triangle", action="store_true", help="the projective triangle of PG(2, p)")
    src.add_argument("--random", action="store_true", help="random minimal t-fold blocking set")
    sp.add_argument("--p", type=int)
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--minimalize", action="store_true")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("witness", help="build and certify a witness function")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--blocking", dest="input", help="t-fold blocking set S' (JSON)")
    src.add_argument("--function", help="balanced function JSON to certify")
    sp.add_argument("--allowed", help="with --function: allowed set E (default: positive support)")
    sp.add_argument("--t", type=int, default=1)
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("lp", help="optimal witness by exact linear programming")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--forbidden", dest="input", help="forbidden set Z (projective set JSON)")
    src.add_argument("--spec", help="LP spec JSON")
    src.add_argument("--from-set", help="set in Z_p^3; Z is the complement of its zero set")
    sp.add_argument("--no-negative", action="store_true", help="force h = 0 on Z instead of h <= 0")
    sp.add_argument("--verify", help="re-check a saved solution instead of solving")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("thresholds", help="CSV table of excluded cardinalities per prime")
    sp.add_argument("--primes", type=int, nargs="+", default=[3, 5, 7, 11, 13])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--starts", type=int, default=20, help="random greedy starts per prime")
    sp.add_argument("--no-lp", action="store_true", help="skip the LP column")
    sp.add_argument("-o", "--output")

    sp = sub.add_parser("search", help="budgeted spectrum and tiling searches")
    sp.add_argument("input", help="set JSON")
    sp.add_argument("--what", choices=["spectrum", "tile", "both"], default="both")
    sp.add_argument("-o", "--output")
    _budget_flags(sp)

    sp = sub.add_parser("fuglede-check", help="spectral vs tile concordance table (CSV)")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--samples", type=int, default=200, help="random subsets at p = 3")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--summary", help="also write a JSON summary here")
    sp.add_argument("-o", "--output")
    _budget_flags(sp)
    return ap


_CORE = {"command", "p", "t", "input", "output", "seed", "max_nodes", "time_limit"}


def config_from_args(args) -> RunConfig:
    cfg = RunConfig(args.command)
    for k, v in vars(args).items():
        if k in _CORE:
            setattr(cfg, k, v)
        elif v is not None and v is not False:
            cfg.extra[k.replace("-", "_")] = v
    if args.command == "blocking":
        cfg.extra["source"] = "input" if args.input else ("triangle" if args.triangle else "random")
        cfg.extra.pop("triangle", None)
        cfg.extra.pop("random", None)
    if hasattr(args, "max_nodes"):
        cfg.max_nodes, cfg.time_limit = _default_budget(args)
    if cfg.p is not None:
        cfg.p = _prime(cfg.p)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
