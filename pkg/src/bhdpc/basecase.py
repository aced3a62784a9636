"""Complete solver for BH_2 instances and the BH_2 auxiliary structures.

Everything here rests on one table per fault set: for every start vertex ``s``
and every vertex subset ``M`` of BH_2, the set of end vertices ``t`` such that
BH_2 - F has a path from ``s`` to ``t`` with vertex set exactly ``M``.  With
16 vertices that is a 16 x 65536 array of 16-bit masks, filled by a numba
kernel in a few tens of milliseconds.  Two-path covers of any vertex subset
are then a scan over the subset's bipartitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Optional, Tuple, Union

import numba
import numpy as np

from .errors import InputError, InternalError
from .instance import Dpc2, Infeasible, Path, Terminals, path_violations
from .topology import (FaultSet, Vertex, canon_edge, common_neighbors, edge_dimension,
                       incident_edges, neighbors, side, twin, vertices)

FULL = (1 << 16) - 1


def index(v: Vertex) -> int:
    return v[0] * 4 + v[1]


VERTS = vertices(2)  # VERTS[index(v)] == v


@numba.njit(cache=True)
def _fill_reach(adj):
    reach = np.zeros((16, 1 << 16), dtype=np.uint16)
    for s in range(16):
        reach[s, 1 << s] = 1 << s
        for mask in range(1, 1 << 16):
            ends = reach[s, mask]
            if ends == 0:
                continue
            for v in range(16):
                if ends >> v & 1:
                    nb = adj[v] & ~mask
                    while nb:
                        w = 0
                        while not (nb >> w & 1):
                            w += 1
                        nb &= ~(1 << w)
                        reach[s, mask | (1 << w)] |= 1 << w
    return reach


@numba.njit(cache=True)
def _first_split(reach, allowed, s1, t1, s2, t2):
    """Smallest M with s1,t1 in M: s1->t1 spans M and s2->t2 spans allowed - M."""
    need_in = (1 << s1) | (1 << t1)
    need_out = (1 << s2) | (1 << t2)
    for m in range(1 << 16):
        if m & ~allowed or (m & need_in) != need_in or m & need_out:
            continue
        if reach[s1, m] >> t1 & 1 and reach[s2, allowed & ~m] >> t2 & 1:
            return m
    return -1


@numba.njit(cache=True)
def _count_feasible(reach, s1s, t1s, s2s, t2s, out):
    for q in range(s1s.shape[0]):
        out[q] = _first_split(reach, 0xFFFF, s1s[q], t1s[q], s2s[q], t2s[q])


class Bh2Table:
    """Path-span table of BH_2 - F."""

    def __init__(self, faults: FaultSet):
        if faults.n != 2:
            raise InputError("Bh2Table needs a BH_2 fault set")
        self.faults = faults
        self.adj = np.zeros(16, dtype=np.int64)
        for v in VERTS:
            m = 0
            for w in neighbors(v):
                if not faults.is_faulty(v, w):
                    m |= 1 << index(w)
            self.adj[index(v)] = m
        self.reach = _fill_reach(self.adj)

    def has_path(self, x: Vertex, y: Vertex, allowed: int = FULL) -> bool:
        return bool(self.reach[index(x), allowed] >> index(y) & 1)

    def path(self, x: Vertex, y: Vertex, allowed: int = FULL) -> Optional[Path]:
        """A path x -> y through exactly the vertices of ``allowed``."""
        s, t = index(x), index(y)
        if not self.reach[s, allowed] >> t & 1:
            return None
        out = [t]
        mask, cur = allowed, t
        while cur != s:
            rest = mask & ~(1 << cur)
            cand = int(self.adj[cur]) & rest & int(self.reach[s, rest])
            prev = (cand & -cand).bit_length() - 1
            out.append(prev)
            mask, cur = rest, prev
        return tuple(VERTS[i] for i in reversed(out))

    def two_paths(self, x1: Vertex, y1: Vertex, x2: Vertex, y2: Vertex,
                  allowed: int = FULL) -> Optional[Tuple[Path, Path]]:
        """Disjoint x1->y1 and x2->y2 paths spanning ``allowed``, or None."""
        m = _first_split(self.reach, allowed, index(x1), index(y1), index(x2), index(y2))
        if m < 0:
            return None
        return self.path(x1, y1, m), self.path(x2, y2, allowed & ~m)

    def feasibility(self, configs: List[Terminals]) -> np.ndarray:
        """Vectorised existence check; entry is the split mask or -1."""
        arr = np.array([[index(v) for v in term.all()] for term in configs], dtype=np.int64)
        out = np.empty(len(configs), dtype=np.int64)
        _count_feasible(self.reach, arr[:, 0], arr[:, 2], arr[:, 1], arr[:, 3], out)
        return out


@lru_cache(maxsize=64)
def table(faults: FaultSet) -> Bh2Table:
    return Bh2Table(faults)


def mask_of(vs) -> int:
    m = 0
    for v in vs:
        m |= 1 << index(v)
    return m


# --------------------------------------------------------------------------
# 2-DPC of BH_2


def exception_witness(faults: FaultSet, terminals: Terminals) -> Optional[Vertex]:
    """A non-terminal vertex x adjacent to both vertices of S (or of T) whose
    only fault-free edges are the two into that pair."""
    if faults.n != 2:
        raise InputError("exception_witness is defined on BH_2")
    for a, b in ((terminals.s1, terminals.s2), (terminals.t1, terminals.t2)):
        for x in common_neighbors(a, b):
            if x in terminals.all():
                continue
            alive = {e for e in incident_edges(x) if e not in faults.edges}
            if alive == {canon_edge(a, x), canon_edge(b, x)}:
                return x
    return None


def solve_bh2(faults: FaultSet, terminals: Terminals) -> Union[Dpc2, Infeasible]:
    if faults.n != 2 or len(terminals.s1) != 2:
        raise InputError("solve_bh2 works on BH_2 only")
    terminals.check()
    t = terminals
    found = table(faults).two_paths(t.s1, t.t1, t.s2, t.t2)
    if found is None:
        return Infeasible(exception_witness(faults, terminals))
    return Dpc2(*found)


# --------------------------------------------------------------------------
# twin-pair structures (u, a, c, b with paths P, Q)


@dataclass(frozen=True)
class PairStructure:
    """u, a, c in V0 with a = twin(c); b in N(a) & N(c); P: u -> t2 and
    Q: c -> t1 disjoint, spanning BH_2 - F, with <c, b, a> opening Q."""

    a: Vertex
    c: Vertex
    b: Vertex
    u: Vertex
    P: Path
    Q: Path


def iter_pair_structures(faults: FaultSet, t1: Vertex, t2: Vertex,
                         allowed: int = FULL, verts=None, filt=None) -> Iterator[PairStructure]:
    """All structures in lexicographic (c, b, u) order.

    ``verts``/``allowed`` restrict to a vertex subset; ``filt`` is an optional
    predicate on (a, c, b, u) checked before any path search.
    """
    tab = table(faults)
    pool = VERTS if verts is None else verts
    evens = [v for v in pool if v[0] % 2 == 0 and allowed >> index(v) & 1]
    for c in evens:
        a = twin(c)
        if not allowed >> index(a) & 1:
            continue
        for b in common_neighbors(a, c):
            if b in (t1, t2) or not allowed >> index(b) & 1:
                continue
            if faults.is_faulty(c, b) or faults.is_faulty(b, a):
                continue
            rest = allowed & ~mask_of((c, b))
            for u in evens:
                if u in (a, c):
                    continue
                if filt is not None and not filt(a, c, b, u):
                    continue
                got = tab.two_paths(a, t1, u, t2, rest)
                if got is not None:
                    q_tail, p = got
                    yield PairStructure(a, c, b, u, p, (c, b) + q_tail)


def _pair_structure(faults: FaultSet, t1: Vertex, t2: Vertex) -> PairStructure:
    if side(t1) != 1 or side(t2) != 1 or t1 == t2:
        raise InputError("t1, t2 must be distinct vertices of V1")
    for s in iter_pair_structures(faults, t1, t2):
        return s
    raise InternalError(f"no (a, c, b, u) structure for F={sorted(faults.edges)}, t1={t1}, t2={t2}")


def pair_structure_two_faults(e, f, t1: Vertex, t2: Vertex) -> PairStructure:
    faults = FaultSet(2, [e, f])
    if len(faults) != 2:
        raise InputError("e and f must be distinct edges")
    return _pair_structure(faults, t1, t2)


def pair_structure_one_fault(e, t1: Vertex, t2: Vertex) -> PairStructure:
    return _pair_structure(FaultSet(2, [e] if e is not None else []), t1, t2)


def pair_structure_violations(s: PairStructure, faults: FaultSet, t1: Vertex, t2: Vertex,
                              verts=None) -> List[str]:
    out = []
    pool = set(VERTS if verts is None else verts)
    if s.a != twin(s.c):
        out.append("a is not the twin of c")
    if side(s.a) or side(s.u) or s.u in (s.a, s.c):
        out.append("u, a, c must be distinct V0 vertices")
    if s.b in (t1, t2) or s.b not in common_neighbors(s.a, s.c):
        out.append("b must be a common neighbour of a and c other than t1, t2")
    if tuple(s.Q[:3]) != (s.c, s.b, s.a):
        out.append("<c, b, a> does not open Q")
    if s.P[0] != s.u or s.P[-1] != t2 or s.Q[-1] != t1:
        out.append("endpoints")
    out += [f"P: {x}" for x in path_violations(s.P, faults)]
    out += [f"Q: {x}" for x in path_violations(s.Q, faults)]
    if set(s.P) & set(s.Q):
        out.append("P and Q share a vertex")
    if set(s.P) | set(s.Q) != pool:
        out.append("coverage")
    return out
