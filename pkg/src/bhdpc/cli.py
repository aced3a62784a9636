"""Command-line entry point.

Exit codes for ``solve``: 0 solved, 1 infeasible or over the fault budget,
2 invalid input, 3 internal error.  The other commands follow the same
scheme (``verify`` exits 1 when the candidate has violations, ``oracle``
exits 1 when no cover exists and 4 when the search ran out of budget).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import metadata
from typing import Dict, List, Optional

from .constructor import _solve
from .errors import FaultBudgetExceeded, InputError, InternalError
from .formats import (cover_to_json, dumps, instance_to_json, load_json, parse_instance,
                      parse_result, parse_vertex_text, to_dot)
from .hampath import DEFAULT_BUDGET, default_budget
from .instance import Instance
from .oracle import (Exists, NotExists, brute_force_dpc, counterexample_instance,
                     infeasibility_certificate, verify_dpc)
from .sweep import SCOPES, run_sweep
from .topology import FaultSet, neighbors, side, vertices

EXIT_SOLVED, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_INTERNAL, EXIT_TIMEOUT = 0, 1, 2, 3, 4
EXIT_BY_STATUS = {"solved": EXIT_SOLVED, "infeasible": EXIT_INFEASIBLE, "error": EXIT_INTERNAL}
ORACLE_BUDGET = 10_000_000


def _emit(obj: Dict, pretty: bool) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) if pretty else dumps(obj)
    sys.stdout.write(text + "\n")


def _oracle_budget(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    return default_budget() if os.environ.get("BHDPC_BUDGET") else ORACLE_BUDGET


def solve_result(inst: Instance, trace: bool = False, oracle_fallback: bool = False,
                 oracle_budget: int = ORACLE_BUDGET) -> Dict:
    """The ResultFile for one instance."""
    try:
        cover, plan = _solve(inst)
    except FaultBudgetExceeded as exc:
        cert = infeasibility_certificate(inst)
        out = {"status": "infeasible", "reason": str(exc)}
        if cert is not None:
            out["certificate"] = cert.to_json()
        return out
    except InternalError as exc:
        out = {"status": "error", "reason": str(exc)}
        if trace and exc.trace is not None:
            out["case_plan"] = exc.trace.to_json()
        if oracle_fallback and inst.n <= 3:
            got = brute_force_dpc(inst, oracle_budget)
            if isinstance(got, Exists):
                out["discrepancy"] = "constructor-missed-cover"
                out["oracle_cover"] = cover_to_json(got.cover)
            elif isinstance(got, NotExists):
                out["discrepancy"] = "no-cover-exists"
            else:
                out["discrepancy"] = "oracle-timeout"
        return out
    out = {"status": "solved", **cover_to_json(cover)}
    if trace and plan is not None:
        out["case_plan"] = plan.to_json()
    return out


def cmd_solve(args) -> int:
    inst = parse_instance(load_json(args.instance))
    out = solve_result(inst, args.trace, args.oracle_fallback, _oracle_budget(None))
    _emit(out, args.pretty)
    return EXIT_BY_STATUS[out["status"]]


def cmd_verify(args) -> int:
    inst = parse_instance(load_json(args.instance))
    res = parse_result(load_json(args.result), inst.n)
    if res["status"] != "solved":
        raise InputError(f"status: expected 'solved', got {res['status']!r}")
    bad = verify_dpc(inst, res["cover"])
    _emit({"valid": not bad, "violations": bad}, args.pretty)
    return EXIT_SOLVED if not bad else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    inst = parse_instance(load_json(args.instance))
    if inst.n > 3:
        raise InputError("n: the oracle handles n <= 3")
    got = brute_force_dpc(inst, _oracle_budget(args.budget))
    cert = infeasibility_certificate(inst)
    out: Dict = {"certificate": cert.to_json() if cert else None}
    if isinstance(got, Exists):
        out.update(status="exists", **cover_to_json(got.cover))
        code = EXIT_SOLVED
    elif isinstance(got, NotExists):
        out.update(status="not-exists", nodes=got.nodes)
        code = EXIT_INFEASIBLE
    else:
        out.update(status="timeout", nodes=got.nodes)
        code = EXIT_TIMEOUT
    _emit(out, args.pretty)
    return code


def cmd_sweep(args) -> int:
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        summary = run_sweep(args.scope, args.seed, args.count, out, workers=args.workers,
                            timing=args.timing, keep_covers=args.covers)
    finally:
        if args.out:
            out.close()
    print(f"{summary.total} instances, {summary.failures} failures", file=sys.stderr)
    return EXIT_SOLVED if summary.failures == 0 else EXIT_INTERNAL


def _default_counterexample(n: int, s1, w, t1, t2):
    s1 = s1 or tuple([0] * n)
    w = w or neighbors(s1)[0]
    others = [v for v in vertices(n) if side(v) == 1 and v != w]
    t1 = t1 or others[0]
    t2 = t2 or next(v for v in others if v != t1)
    return s1, w, t1, t2


def cmd_counterexample(args) -> int:
    n = args.n
    parse = {k: (parse_vertex_text(getattr(args, k), n, f"--{k}") if getattr(args, k) else None)
             for k in ("s1", "w", "t1", "t2")}
    s1, w, t1, t2 = _default_counterexample(n, parse["s1"], parse["w"], parse["t1"], parse["t2"])
    inst = counterexample_instance(n, s1, w, t1, t2)
    _emit(instance_to_json(inst), args.pretty)
    return EXIT_SOLVED


def cmd_export(args) -> int:
    if not 1 <= args.n <= 4:
        raise InputError("n: full-graph export needs 1 <= n <= 4")
    faults, cover = FaultSet(args.n), None
    if args.instance:
        inst = parse_instance(load_json(args.instance))
        if inst.n != args.n:
            raise InputError(f"n: the instance has n = {inst.n}, not {args.n}")
        faults = inst.faults
    if args.result:
        res = parse_result(load_json(args.result), args.n)
        cover = res.get("cover")
    sys.stdout.write(to_dot(args.n, faults, cover))
    return EXIT_SOLVED


def cmd_info(args) -> int:
    try:
        import numba
        jit = numba.__version__
    except ImportError:
        jit = None
    rows: List[Dict] = [{"n": n, "vertices": 4 ** n, "edges": n * 4 ** n,
                         "fault_budget": 2 * n - 3 if n >= 2 else None}
                        for n in range(1, args.max_n + 1)]
    try:
        version = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        version = None
    _emit({"version": version, "numba": jit, "search_budget": default_budget(),
           "default_search_budget": DEFAULT_BUDGET,
           "budget_env": os.environ.get("BHDPC_BUDGET"), "sizes": rows}, args.pretty)
    return EXIT_SOLVED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bhdpc", description="Paired 2-disjoint path covers of "
                                "balanced hypercubes with faulty edges.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--pretty", action="store_true", help="indent JSON output")
        sp.set_defaults(fn=fn)
        return sp

    s = add("solve", cmd_solve, "build a cover for an instance file")
    s.add_argument("instance", help="instance JSON file, or - for stdin")
    s.add_argument("--trace", action="store_true", help="embed the case plan")
    s.add_argument("--oracle-fallback", action="store_true",
                   help="on internal error (n <= 3) ask the exhaustive search why")

    s = add("verify", cmd_verify, "check a result file against its instance")
    s.add_argument("instance")
    s.add_argument("result")

    s = add("oracle", cmd_oracle, "exhaustive search (n <= 3)")
    s.add_argument("instance")
    s.add_argument("--budget", type=int, help="node limit (default BHDPC_BUDGET or 10M)")

    s = add("sweep", cmd_sweep, "run many instances and write a JSON-lines report")
    s.add_argument("scope", choices=SCOPES)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--count", type=int, help="instances for random scopes")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="report file (default stdout)")
    s.add_argument("--timing", action="store_true",
                   help="record per-instance millis (reports are then not byte-stable)")
    s.add_argument("--covers", action="store_true", help="include the cover paths")

    s = add("counterexample", cmd_counterexample, "instance with 2n-2 faults and no cover")
    s.add_argument("n", type=int)
    for k in ("s1", "w", "t1", "t2"):
        s.add_argument(f"--{k}", help="comma-separated coordinates")

    s = add("export", cmd_export, "BH_n as DOT, optionally with faults and a cover")
    s.add_argument("n", type=int)
    s.add_argument("--instance", help="instance file supplying the faults")
    s.add_argument("--result", help="result file supplying the cover")

    s = add("info", cmd_info, "sizes, budgets and JIT availability")
    s.add_argument("--max-n", type=int, default=5)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
