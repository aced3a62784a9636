"""Ground truth for small instances: verifier, brute-force 2-DPC search,
blocked-vertex certificates, the optimality counterexample and probes of the
path/cycle properties the construction relies on."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numba
import numpy as np

from .errors import InputError
from .hampath import _adjacency, _index, _lowbit, _popcount, _search, _side_mask
from .instance import Dpc2, Instance, Path, Terminals
from .topology import (FaultSet, Vertex, canon_edge, dim_neighbors, distance, edges, incident_edges,
                       is_adjacent, neighbors, side, split, twin, validate_vertex, vertices)


# --------------------------------------------------------------------------
# verifier


def verify_dpc(inst: Instance, cand: Dpc2) -> List[str]:
    """All violations of the 2-DPC contract; an empty list means valid."""
    out = []
    t = inst.terminals
    for name, p, a, b in (("p1", cand.p1, t.s1, t.t1), ("p2", cand.p2, t.s2, t.t2)):
        if not p:
            out.append(f"{name} is empty")
            continue
        if tuple(p[0]) != a or tuple(p[-1]) != b:
            out.append(f"{name} runs {p[0]} -> {p[-1]}, expected {a} -> {b}")
        seen = set()
        for v in p:
            if v in seen:
                out.append(f"{name} repeats vertex {v}")
            seen.add(v)
        for u, v in zip(p, p[1:]):
            if not is_adjacent(tuple(u), tuple(v)):
                out.append(f"{name}: {u}-{v} is not an edge")
            elif inst.faults.is_faulty(tuple(u), tuple(v)):
                out.append(f"{name}: faulty edge used {u}-{v}")
    for v in sorted(set(cand.p1) & set(cand.p2)):
        out.append(f"not disjoint at {v}")
    covered = set(cand.p1) | set(cand.p2)
    missing = set(vertices(inst.n)) - covered
    if missing:
        out.append(f"coverage: {len(missing)} vertices missed, e.g. {min(missing)}")
    extra = covered - set(vertices(inst.n))
    if extra:
        out.append(f"foreign vertices {sorted(extra)[:3]}")
    return out


# --------------------------------------------------------------------------
# brute-force 2-DPC


@dataclass(frozen=True)
class Exists:
    cover: Dpc2


@dataclass(frozen=True)
class NotExists:
    nodes: int = 0


@dataclass(frozen=True)
class Timeout:
    nodes: int = 0


OracleResult = Union[Exists, NotExists, Timeout]


@numba.njit(cache=True)
def _dpc_search(adj, odd, s1, t1, s2, t2, budget):
    """Enumerate s1 -> t1 paths avoiding s2, t2; at each complete one ask the
    Hamiltonian kernel for s2 -> t2 on what is left.

    Returns (status, path1, len1, path2, len2, nodes) with status 1 found,
    0 exhausted, 2 out of budget.
    """
    one = np.uint64(1)
    nv = adj.shape[0]
    full = np.uint64(0)
    for i in range(nv):
        full |= one << np.uint64(i)
    term2 = (one << np.uint64(s2)) | (one << np.uint64(t2))
    path = np.empty(nv, dtype=np.int64)
    cand = np.zeros((nv, nv), dtype=np.int64)
    ncand = np.zeros(nv, dtype=np.int64)
    pos = np.zeros(nv, dtype=np.int64)
    rank = np.arange(nv).astype(np.int64)
    empty = np.empty(0, dtype=np.int64)
    path[0] = s1
    depth = 0
    unvisited = full & ~(one << np.uint64(s1))
    nodes = 0
    fresh = True
    while True:
        if fresh:
            fresh = False
            nodes += 1
            if nodes > budget:
                return 2, path, 0, empty, 0, nodes
            head = path[depth]
            k = 0
            if head == t1:
                rest = unvisited
                st, p2, l2 = _search(adj, odd, rest, s2, t2, budget - nodes, True, rank)
                if st == 1:
                    return 1, path, depth + 1, p2, l2, nodes
                if st == 2:
                    return 2, path, 0, empty, 0, nodes
            elif _dpc_viable(adj, unvisited, head, t1, s2, t2):
                o = adj[head] & unvisited & ~term2
                while o:
                    w = _lowbit(o)
                    o &= ~(one << np.uint64(w))
                    cand[depth, k] = w
                    k += 1
            ncand[depth] = k
            pos[depth] = 0
        if pos[depth] < ncand[depth]:
            w = cand[depth, pos[depth]]
            pos[depth] += 1
            depth += 1
            path[depth] = w
            unvisited &= ~(one << np.uint64(w))
            fresh = True
        else:
            if depth == 0:
                return 0, path, 0, empty, 0, nodes
            unvisited |= one << np.uint64(path[depth])
            depth -= 1


@numba.njit(cache=True)
def _dpc_viable(adj, unvisited, head, t1, s2, t2):
    """Degree test on the vertices not yet placed while path 1 is open.

    A vertex still to be placed is interior to a path unless it is t1, t2
    or s2, so it needs two edges into (unvisited + head); s2 counts as a free
    end for path 2.  The ends t1, t2 and s2 need one.
    """
    one = np.uint64(1)
    usable = unvisited | (one << np.uint64(head))
    u = unvisited
    while u:
        w = _lowbit(u)
        u &= ~(one << np.uint64(w))
        need = 1 if (w == t1 or w == t2 or w == s2) else 2
        if _popcount(adj[w] & usable) < need:
            return False
    return True


def brute_force_dpc(inst: Instance, budget: int = 10_000_000) -> OracleResult:
    """Complete search for a 2-DPC (BH_n with n <= 3)."""
    n = inst.n
    if 4 ** n > 64:
        raise InputError("brute_force_dpc handles at most 64 vertices (n <= 3)")
    inst.terminals.check()
    vs, idx = _index(n)
    adj = np.array(_adjacency(inst.faults), dtype=np.uint64)
    t = inst.terminals
    st, p1, l1, p2, l2, nodes = _dpc_search(adj, np.uint64(_side_mask(n)), idx[t.s1], idx[t.t1],
                                            idx[t.s2], idx[t.t2], budget)
    if st == 1:
        return Exists(Dpc2(tuple(vs[i] for i in p1[:l1]), tuple(vs[i] for i in p2[:l2])))
    if st == 0:
        return NotExists(int(nodes))
    return Timeout(int(nodes))


# --------------------------------------------------------------------------
# certificates and the counterexample


@dataclass(frozen=True)
class Certificate:
    kind: str  # "blocked-vertex" or "exhausted-search"
    witness: Optional[Vertex] = None
    live_edges: Tuple = ()
    pair: Tuple = ()

    def to_json(self) -> Dict:
        out = {"kind": self.kind}
        if self.witness is not None:
            out["witness"] = list(self.witness)
            out["live_edges"] = [[list(a), list(b)] for a, b in self.live_edges]
            out["pair"] = [list(v) for v in self.pair]
        return out


def infeasibility_certificate(inst: Instance) -> Optional[Certificate]:
    """A non-terminal vertex whose at most two live edges all lead into one
    terminal pair: it cannot be interior to either path, so no 2-DPC exists."""
    t = inst.terminals
    terms = set(t.all())
    for w in vertices(inst.n):
        if w in terms:
            continue
        live = [e for e in incident_edges(w) if e not in inst.faults.edges]
        if len(live) > 2:
            continue
        ends = {a if b == w else b for a, b in live}
        for pair in ((t.s1, t.s2), (t.t1, t.t2)):
            if ends <= set(pair):
                return Certificate("blocked-vertex", w, tuple(sorted(live)), pair)
    return None


def counterexample_instance(n: int, s1, w, t1, t2) -> Instance:
    """s2 = twin(s1) and every edge at w except s1w, s2w is faulty (2n - 2 faults)."""
    s1, w = validate_vertex(s1, n), validate_vertex(w, n)
    t1, t2 = validate_vertex(t1, n), validate_vertex(t2, n)
    if side(s1) != 0:
        raise InputError("s1 must have an even inner index")
    if not is_adjacent(s1, w):
        raise InputError(f"{w} is not a neighbour of {s1}")
    s2 = twin(s1)
    faults = FaultSet(n, [e for e in incident_edges(w) if s1 not in e and s2 not in e])
    return Instance(n, faults, Terminals.make(s1, s2, t1, t2, n))


# --------------------------------------------------------------------------
# property probes


@dataclass
class ProbeReport:
    n: int
    bipanconnected: Optional[bool] = None
    missing_lengths: List[Tuple] = field(default_factory=list)
    eight_cycles: Optional[bool] = None
    edges_without_cycle: List = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.bipanconnected is not False and self.eight_cycles is not False


@numba.njit(cache=True)
def _path_lengths(adj, s, nv):
    """found[t, l] = 1 iff some s -> t path has length l (all simple paths)."""
    one = np.uint64(1)
    found = np.zeros((nv, nv), dtype=np.uint8)
    path = np.empty(nv, dtype=np.int64)
    it = np.zeros(nv, dtype=np.uint64)
    path[0] = s
    depth = 0
    visited = one << np.uint64(s)
    it[0] = adj[s]
    found[s, 0] = 1
    while depth >= 0:
        o = it[depth] & ~visited
        if o == 0:
            visited &= ~(one << np.uint64(path[depth]))
            depth -= 1
            continue
        w = _lowbit(o)
        it[depth] &= ~(one << np.uint64(w))
        depth += 1
        path[depth] = w
        visited |= one << np.uint64(w)
        found[w, depth] = 1
        it[depth] = adj[w]
    return found


def bipanconnectivity(n: int = 2) -> List[Tuple]:
    """(u, v, l) triples with d(u, v) <= l <= 4^n - 1, matching parity, and no
    u -> v path of length l.  Empty means bipanconnected."""
    vs, idx = _index(n)
    adj = np.array(_adjacency(FaultSet(n)), dtype=np.uint64)
    top = len(vs) - 1
    missing = []
    dist_cache = {}
    for u in vs:
        found = _path_lengths(adj, idx[u], len(vs))
        for v in vs:
            if v == u:
                continue
            d = dist_cache.setdefault((u, v), distance(u, v))
            for l in range(d, top + 1, 2):
                if not found[idx[v], l]:
                    missing.append((u, v, l))
    return missing


def eight_cycle(n: int, e) -> Optional[Path]:
    """An 8-cycle through ``e`` with exactly one edge inside each block of the
    split along dimension n - 1 (returned as a closed vertex sequence)."""
    u, v = e
    sp = split(n, n - 1)
    block = sp.part_of
    target = 8

    def inner(a, b):
        return block(a) == block(b)

    best = None

    def dfs(path, used_blocks):
        nonlocal best
        if best is not None:
            return
        cur = path[-1]
        if len(path) == target:
            if is_adjacent(cur, path[0]):
                edge_ok = _count_inner(path + [path[0]], block)
                if edge_ok:
                    best = tuple(path + [path[0]])
            return
        for w in neighbors(cur):
            if w in path:
                continue
            if inner(cur, w):
                if block(w) in used_blocks:
                    continue
                dfs(path + [w], used_blocks | {block(w)})
            else:
                dfs(path + [w], used_blocks)

    start = {block(u)} if inner(u, v) else set()
    dfs([u, v], start)
    return best


def _count_inner(cyc, block) -> bool:
    per = [0, 0, 0, 0]
    for a, b in zip(cyc, cyc[1:]):
        if block(a) == block(b):
            per[block(a)] += 1
    return per == [1, 1, 1, 1]


def property_probes(n: int) -> ProbeReport:
    rep = ProbeReport(n)
    if n == 2:
        rep.missing_lengths = bipanconnectivity(2)
        rep.bipanconnected = not rep.missing_lengths
    if 2 <= n <= 3:
        rep.edges_without_cycle = [e for e in edges(n) if eight_cycle(n, e) is None]
        rep.eight_cycles = not rep.edges_without_cycle
    return rep


# --------------------------------------------------------------------------
# independent existence checks for the block structures (BH_2 blocks)


def _live_adjacency(faults: FaultSet, block) -> Dict[Vertex, List[Vertex]]:
    inside = set(block)
    return {v: sorted(w for w in neighbors(v) if w in inside and not faults.is_faulty(v, w))
            for v in inside}


def _simple_paths(adj, s: Vertex, t: Vertex, banned: set):
    """Every simple s -> t path avoiding ``banned`` (plain recursive DFS)."""
    path, seen = [s], {s} | banned

    def rec(v):
        if v == t:
            yield tuple(path)
            return
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                path.append(w)
                yield from rec(w)
                path.pop()
                seen.discard(w)

    yield from rec(s)


def _spanning_path(adj, s: Vertex, t: Vertex, cover: set) -> bool:
    return any(len(p) == len(cover)
               for p in _simple_paths(adj, s, t, set(adj) - cover))


def _cross_clean(faults: FaultSet, v: Vertex, k: int) -> bool:
    return any(faults.faulty_at(x, k) == 0 for x in dim_neighbors(v, k))


def _good(faults: FaultSet, v: Vertex) -> bool:
    return all(faults.faulty_at(v, j) < 2 for j in range(faults.n))


def cycle_structure_exists(n: int, faults: FaultSet, k: int, i: int) -> bool:
    """Exhaustive scan for a 4-cycle structure in block i (n = 3 only)."""
    if n != 3:
        raise InputError("the exhaustive structure scan handles n = 3")
    block = split(n, k).part(i)
    adj = _live_adjacency(faults, block)
    for a in (v for v in block if side(v) == 0):
        c = twin(a)
        if not _cross_clean(faults, a, k):
            continue
        for b in (w for w in neighbors(a) if w in adj):
            d = twin(b)
            if faults.is_faulty(c, d) or faults.faulty_at(b, k) or faults.faulty_at(d, k) > 1:
                continue
            for u in (w for w in neighbors(b) if w in adj and w in neighbors(d)):
                if u in (a, c) or not _good(faults, u):
                    continue
                if _spanning_path(adj, u, a, set(block) - {b, c, d}):
                    return True
    return False


def twin_path_structure_exists(n: int, faults: FaultSet, k: int, i: int, t1, t2) -> bool:
    """Exhaustive scan for a twin-path structure in block i (n = 3 only)."""
    if n != 3:
        raise InputError("the exhaustive structure scan handles n = 3")
    block = split(n, k).part(i)
    adj = _live_adjacency(faults, block)
    evens = [v for v in block if side(v) == 0]
    for c in evens:
        a = twin(c)
        if not _cross_clean(faults, a, k):
            continue
        for b in (w for w in neighbors(c) if w in adj):
            if b in (t1, t2) or faults.faulty_at(b, k) > 1:
                continue
            if faults.is_faulty(c, b) or faults.is_faulty(b, a):
                continue
            for u in evens:
                if u in (a, c) or not _good(faults, u):
                    continue
                banned = {c, b, u, t2}
                for tail in _simple_paths(adj, a, t1, banned):
                    rest = set(block) - set(tail) - {c, b}
                    if _spanning_path(adj, u, t2, rest):
                        return True
    return False
