"""Deterministic batch runs over generated instances.

Instances are generated in the parent process from one seeded generator and
results are written in generation order by a single writer, so a report
depends only on (scope, seed, count) and not on the number of workers.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from multiprocessing import get_context
from typing import Callable, Dict, Iterator, Optional, TextIO, Tuple

from .basecase import exception_witness, solve_bh2
from .constructor import _solve
from .errors import BhdpcError
from .formats import cover_to_json, dumps, instance_to_json
from .instance import Dpc2, Instance, Terminals, all_terminal_configs
from .oracle import verify_dpc
from .topology import FaultSet, edges, edges_of_dim, vertices

SCOPES = ("bh2-all", "bh3-random", "bh4-random")
GENERATOR = "python random.Random (MT19937)"
DEFAULT_COUNTS = {"bh3-random": 10_000, "bh4-random": 200}


def random_instance(rng: random.Random, n: int, max_faults: Optional[int] = None) -> Instance:
    """|F| uniform in 0..max_faults, faults drawn from the edges without
    replacement, S side uniform, terminals uniform and distinct per side."""
    top = 2 * n - 3 if max_faults is None else max_faults
    all_e = edges(n)
    faults = FaultSet(n, rng.sample(all_e, rng.randint(0, top)))
    sides = ([v for v in vertices(n) if v[0] % 2 == 0], [v for v in vertices(n) if v[0] % 2 == 1])
    s_side = rng.randrange(2)
    s1, s2 = rng.sample(sides[s_side], 2)
    t1, t2 = rng.sample(sides[1 - s_side], 2)
    return Instance(n, faults, Terminals(s1, s2, t1, t2))


def random_instances(n: int, seed: int, count: int) -> Iterator[Tuple[str, Instance]]:
    rng = random.Random(seed)
    for _ in range(count):
        yield "random", random_instance(rng, n)


def bh2_instances() -> Iterator[Tuple[str, Instance]]:
    """Every |F| <= 1 instance, then every fault pair with one edge of each
    dimension, each against all terminal configurations."""
    configs = list(all_terminal_configs(2))
    options = [FaultSet(2)] + [FaultSet(2, [e]) for e in edges(2)]
    for f in options:
        for t in configs:
            yield "single-fault", Instance(2, f, t)
    for e in edges_of_dim(2, 0):
        for g in edges_of_dim(2, 1):
            f = FaultSet(2, [e, g])
            for t in configs:
                yield "fault-pair", Instance(2, f, t)


def check_instance(item: Tuple[str, Instance]) -> Dict:
    """Run one instance; ``ok`` is False exactly when something is defective."""
    suite, inst = item
    start = time.perf_counter()
    rec: Dict = {"suite": suite, "instance": instance_to_json(inst)}
    try:
        if suite == "fault-pair":
            got = solve_bh2(inst.faults, inst.terminals)
            witness = exception_witness(inst.faults, inst.terminals)
            if isinstance(got, Dpc2):
                bad = verify_dpc(inst, got)
                rec["status"] = "solved"
                rec["ok"] = not bad and witness is None
                if bad:
                    rec["error"] = bad[:3]
            else:
                rec["status"] = "infeasible"
                rec["ok"] = witness is not None
                if witness is not None:
                    rec["certificate"] = {"kind": "blocked-vertex", "witness": list(witness)}
        else:
            cover, _ = _solve(inst)
            rec["status"] = "solved"
            rec["ok"] = True
            rec["cover"] = cover_to_json(cover)
    except BhdpcError as exc:
        rec["status"] = "error"
        rec["ok"] = False
        rec["error"] = f"{type(exc).__name__}: {exc}"
    rec["millis"] = round((time.perf_counter() - start) * 1000, 3)
    return rec


@dataclass
class SweepSummary:
    total: int = 0
    failures: int = 0


def _items(scope: str, seed: int, count: Optional[int]):
    if scope == "bh2-all":
        return bh2_instances()
    return random_instances(3 if scope == "bh3-random" else 4, seed, count)


def run_sweep(scope: str, seed: int, count: Optional[int], out: TextIO, workers: int = 1,
              timing: bool = False, keep_covers: bool = False,
              progress: Optional[Callable[[int], None]] = None) -> SweepSummary:
    """Write a header line, one record per instance, and a summary line."""
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}")
    if scope == "bh2-all":
        count = None
    elif count is None:
        count = DEFAULT_COUNTS[scope]
    header = {"scope": scope, "seed": seed, "generator": GENERATOR, "count": count}
    out.write(dumps({"header": header}) + "\n")
    summary = SweepSummary()
    items = _items(scope, seed, count)

    def emit(rec: Dict):
        summary.total += 1
        summary.failures += not rec["ok"]
        if not timing:
            rec.pop("millis", None)
        if not keep_covers:
            rec.pop("cover", None)
        out.write(dumps(rec) + "\n")
        if progress is not None:
            progress(summary.total)

    if workers <= 1:
        for item in items:
            emit(check_instance(item))
    else:
        with get_context("spawn").Pool(workers) as pool:
            for rec in pool.imap(check_instance, items, chunksize=64):
                emit(rec)
    out.write(dumps({"summary": {"total": summary.total, "failures": summary.failures}}) + "\n")
    return summary

