"""Hamiltonian and near-Hamiltonian paths of BH_n - F by complete search.

The search is a depth-first extension of the path from x with three prunes:

* degree forcing: an unvisited vertex other than y whose only remaining
  options are the current head and one more vertex must be visited next;
  one with fewer options kills the branch;
* partite balance: the unvisited vertices must be able to alternate sides
  from the head to y;
* connectivity: every unvisited vertex must stay reachable from the head.

Children are tried in order of fewest onward options, ties broken by a vertex
rank.  The first attempt ranks vertices lexicographically; when its node
allowance runs out the search restarts with a seeded random rank and a
doubled allowance, until the total budget is spent.  Every attempt is a
complete search under its own order, so an exhausted attempt proves that no
path exists, and the fixed seeds keep results deterministic.  Graphs with at
most 64 vertices run in a numba kernel on uint64 masks; larger ones use the
same procedure on Python integers.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numba
import numpy as np

from .errors import BudgetExceeded, InputError, NotFound
from .instance import Path
from .topology import FaultSet, Subcube, Vertex, neighbors, side, validate_vertex, vertices

DEFAULT_BUDGET = 50_000_000
FIRST_SLICE = 5_000


def default_budget() -> int:
    raw = os.environ.get("BHDPC_BUDGET")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise InputError(f"BHDPC_BUDGET must be an integer, got {raw!r}")
    return DEFAULT_BUDGET


@dataclass(frozen=True)
class HamQuery:
    n: int
    faults: FaultSet
    x: Vertex
    y: Vertex
    excluded: FrozenSet[Vertex] = field(default_factory=frozenset)
    budget: Optional[int] = None

    def check(self) -> None:
        validate_vertex(self.x, self.n)
        validate_vertex(self.y, self.n)
        if self.faults.n != self.n:
            raise InputError("fault set belongs to a different BH_n")
        if self.x == self.y:
            raise InputError("x and y must differ")
        if self.x in self.excluded or self.y in self.excluded:
            raise InputError("an endpoint is excluded")


# --------------------------------------------------------------------------
# graph encoding


@lru_cache(maxsize=None)
def _index(n: int):
    vs = vertices(n)
    return vs, {v: i for i, v in enumerate(vs)}


@lru_cache(maxsize=256)
def _adjacency(faults: FaultSet) -> Tuple[int, ...]:
    vs, idx = _index(faults.n)
    out = []
    for v in vs:
        m = 0
        for w in neighbors(v):
            if not faults.is_faulty(v, w):
                m |= 1 << idx[w]
        out.append(m)
    return tuple(out)


@lru_cache(maxsize=None)
def _side_mask(n: int) -> int:
    vs, _ = _index(n)
    m = 0
    for i, v in enumerate(vs):
        if v[0] % 2:
            m |= 1 << i
    return m


# --------------------------------------------------------------------------
# numba kernel (<= 64 vertices)


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@numba.njit(cache=True)
def _lowbit(x):
    i = 0
    while not (x >> np.uint64(i)) & np.uint64(1):
        i += 1
    return i


@numba.njit(cache=True)
def _viable(adj, odd, unvisited, head, t, prune):
    """0 = dead branch, otherwise 1; writes nothing."""
    one = np.uint64(1)
    if unvisited == 0:
        return head == t
    if not prune:
        return 1
    # partite balance over the vertices still to come after head
    r = _popcount(unvisited)
    r1 = _popcount(unvisited & odd)
    hside = (odd >> np.uint64(head)) & one
    other = r - r // 2  # count on the side opposite head
    if hside == 1:
        want1 = r // 2
    else:
        want1 = other
    if r1 != want1:
        return 0
    # connectivity from head through unvisited
    seen = np.uint64(0)
    frontier = adj[head] & unvisited
    while frontier:
        seen |= frontier
        nxt = np.uint64(0)
        f = frontier
        while f:
            v = _lowbit(f)
            f &= ~(one << np.uint64(v))
            nxt |= adj[v]
        frontier = nxt & unvisited & ~seen
    if seen != unvisited:
        return 0
    return 1


@numba.njit(cache=True)
def _search(adj, odd, allowed, s, t, budget, prune, rank):
    """Returns (status, path, length); status 1 found, 0 none, 2 budget."""
    one = np.uint64(1)
    nv = adj.shape[0]
    path = np.empty(nv, dtype=np.int64)
    cand = np.zeros((nv, nv), dtype=np.int64)
    ncand = np.zeros(nv, dtype=np.int64)
    pos = np.zeros(nv, dtype=np.int64)
    total = _popcount(allowed)
    path[0] = s
    depth = 0
    unvisited = allowed & ~(one << np.uint64(s))
    nodes = 0
    # generate children of depth 0
    fresh = True
    while True:
        if fresh:
            fresh = False
            head = path[depth]
            nodes += 1
            if nodes > budget:
                return 2, path, 0
            if depth + 1 == total:
                if head == t:
                    return 1, path, total
                ncand[depth] = 0
            else:
                # forced vertex: an unvisited non-terminal whose options are head + one
                forced = -1
                dead = False
                opts = adj[head] & unvisited
                if prune:
                    o = opts
                    while o:
                        w = _lowbit(o)
                        o &= ~(one << np.uint64(w))
                        if w == t:
                            continue
                        deg = _popcount(adj[w] & unvisited)
                        if deg <= 1:
                            if forced >= 0 and forced != w:
                                dead = True
                                break
                            forced = w
                    if not dead:
                        # an unvisited vertex away from head with < 2 options is fatal
                        rest = unvisited & ~adj[head]
                        while rest:
                            w = _lowbit(rest)
                            rest &= ~(one << np.uint64(w))
                            need = 1 if w == t else 2
                            if _popcount(adj[w] & unvisited) < need:
                                dead = True
                                break
                k = 0
                if not dead:
                    if forced >= 0:
                        cand[depth, 0] = forced
                        k = 1
                    else:
                        # order by onward options, then index
                        o = opts
                        while o:
                            w = _lowbit(o)
                            o &= ~(one << np.uint64(w))
                            if w == t and depth + 2 != total:
                                continue
                            cand[depth, k] = w
                            k += 1
                        if prune:
                            keys = np.empty(k, dtype=np.int64)
                            for q in range(k):
                                w = cand[depth, q]
                                keys[q] = _popcount(adj[w] & unvisited) * 128 + rank[w]
                            order = np.argsort(keys)
                            tmp = np.empty(k, dtype=np.int64)
                            for q in range(k):
                                tmp[q] = cand[depth, order[q]]
                            for q in range(k):
                                cand[depth, q] = tmp[q]
                ncand[depth] = k
            pos[depth] = 0
        # advance to next viable child, or backtrack
        if pos[depth] < ncand[depth]:
            w = cand[depth, pos[depth]]
            pos[depth] += 1
            nu = unvisited & ~(one << np.uint64(w))
            if _viable(adj, odd, nu, w, t, prune):
                depth += 1
                path[depth] = w
                unvisited = nu
                fresh = True
        else:
            if depth == 0:
                return 0, path, 0
            unvisited |= one << np.uint64(path[depth])
            depth -= 1


# --------------------------------------------------------------------------
# Python fallback (> 64 vertices), same procedure


class _OutOfBudget(Exception):
    pass


def _popc(x: int) -> int:
    return bin(x).count("1")


def _py_search(adj, odd, allowed, s, t, budget, prune, rank):
    sys_budget = [budget]

    def bits(x):
        while x:
            low = x & -x
            yield low.bit_length() - 1
            x ^= low

    total = _popc(allowed)
    path = [s]

    def viable(unvisited, head):
        if unvisited == 0:
            return head == t
        if not prune:
            return True
        r = _popc(unvisited)
        r1 = _popc(unvisited & odd)
        want1 = r // 2 if odd >> head & 1 else r - r // 2
        if r1 != want1:
            return False
        seen, frontier = 0, adj[head] & unvisited
        while frontier:
            seen |= frontier
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            frontier = nxt & unvisited & ~seen
        return seen == unvisited

    def rec(head, unvisited):
        sys_budget[0] -= 1
        if sys_budget[0] < 0:
            raise _OutOfBudget
        if len(path) == total:
            return head == t
        opts = adj[head] & unvisited
        kids = []
        if prune:
            forced = None
            for w in bits(opts):
                if w != t and _popc(adj[w] & unvisited) <= 1:
                    if forced is not None:
                        return False
                    forced = w
            for w in bits(unvisited & ~adj[head]):
                if _popc(adj[w] & unvisited) < (1 if w == t else 2):
                    return False
            if forced is not None:
                kids = [forced]
        if not kids:
            kids = [w for w in bits(opts) if w != t or len(path) + 1 == total]
            if prune:
                kids.sort(key=lambda w: (_popc(adj[w] & unvisited), rank[w]))
        for w in kids:
            nu = unvisited & ~(1 << w)
            if viable(nu, w):
                path.append(w)
                if rec(w, nu):
                    return True
                path.pop()
        return False

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, total + 1000))
    try:
        found = rec(s, allowed & ~(1 << s))
    except _OutOfBudget:
        return 2, path
    finally:
        sys.setrecursionlimit(old)
    return (1 if found else 0), path


# --------------------------------------------------------------------------
# public API


def _run(q: HamQuery, prune: bool = True) -> Path:
    q.check()
    vs, idx = _index(q.n)
    adj = _adjacency(q.faults)
    odd = _side_mask(q.n)
    allowed = (1 << len(vs)) - 1
    for v in q.excluded:
        allowed &= ~(1 << idx[validate_vertex(v, q.n)])
    s, t = idx[q.x], idx[q.y]
    budget = q.budget if q.budget is not None else default_budget()
    # cheap necessary condition before searching
    r = _popc(allowed)
    r1 = _popc(allowed & odd)
    sx, sy = side(q.x), side(q.y)
    if r % 2 == 0:
        ok = sx != sy and r1 == r // 2
    else:
        ok = sx == sy and r1 == (r // 2 + 1 if sx else r // 2)
    if prune and not ok:
        raise NotFound("the vertex set cannot be traversed alternately between x and y")
    spent = 0
    for attempt in itertools.count():
        rank = np.arange(len(vs), dtype=np.int64)
        if attempt:
            rank = np.random.RandomState(attempt).permutation(len(vs)).astype(np.int64)
        # restart budgets grow geometrically; the last attempt gets the rest
        slice_ = min(FIRST_SLICE << attempt, budget - spent) if prune else budget
        if len(vs) <= 64:
            status, path, length = _search(np.array(adj, dtype=np.uint64), np.uint64(odd),
                                           np.uint64(allowed), s, t, slice_, prune, rank)
            path = path[:length]
        else:
            status, path = _py_search(adj, odd, allowed, s, t, slice_, prune, list(rank))
        spent += slice_
        if status == 1:
            return tuple(vs[i] for i in path)
        if status == 0:
            raise NotFound("no path covers the requested vertex set")
        if spent >= budget:
            raise BudgetExceeded(f"no decision within {budget} node expansions")


def ham_path(q: HamQuery) -> Path:
    """A Hamiltonian x -> y path of BH_n - F."""
    if q.excluded:
        raise InputError("ham_path takes no excluded vertices; use longest_path_excluding")
    return _run(q)


def longest_path_excluding(q: HamQuery) -> Path:
    """An x -> y path through every vertex of BH_n - F except ``q.excluded``."""
    return _run(q)


def reference_path(q: HamQuery) -> Optional[Path]:
    """Plain DFS with no pruning at all; None if no path."""
    try:
        return _run(q, prune=False)
    except NotFound:
        return None


def find_path(n: int, faults: FaultSet, x: Vertex, y: Vertex,
              excluded: Sequence[Vertex] = (), budget: Optional[int] = None) -> Path:
    return _run(HamQuery(n, faults, tuple(x), tuple(y), frozenset(map(tuple, excluded)), budget))


def subcube_path(sc: Subcube, faults: FaultSet, x: Vertex, y: Vertex,
                 excluded: Sequence[Vertex] = ()) -> Optional[Path]:
    """An x -> y path through every vertex of the subcube except ``excluded``,
    avoiding ``faults``; vertices are global.  None when no such path exists.

    BH_1 and BH_2 subcubes are answered exactly from small tables; larger
    ones go through the search above.
    """
    local = sc.local_faults(faults)
    lx, ly = sc.down(x), sc.down(y)
    lex = [sc.down(v) for v in excluded]
    if sc.dim == 2:
        from .basecase import FULL, mask_of, table
        got = table(local).path(lx, ly, FULL & ~mask_of(lex))
    elif sc.dim == 1:
        got = _bh1_path(local, lx, ly, lex)
    else:
        got = None
        if sc.dim >= 4 and not lex and len(local) <= 2 * sc.dim - 3:
            got = _path_from_cover(sc.dim, local, lx, ly)
        if got is None:
            try:
                got = _run(HamQuery(sc.dim, local, lx, ly, frozenset(lex)))
            except NotFound:
                got = None
    if got is None:
        return None
    return tuple(sc.up(w) for w in got)


COVER_TRIES = 4


def _path_from_cover(n: int, faults: FaultSet, x: Vertex, y: Vertex) -> Optional[Path]:
    """A Hamiltonian x -> y path assembled from a 2-DPC {x -> u, v -> y}
    joined along a fault-free edge uv; None if the first few edges fail.

    Avoids running the exhaustive search on graphs too large for it.
    """
    from .constructor import _construct
    from .errors import InternalError
    from .instance import Terminals

    if x == y or side(x) == side(y):
        return None
    tries = 0
    for u in vertices(n):
        if side(u) == side(x) or u == y:
            continue
        for v in neighbors(u):
            if v == x or faults.is_faulty(u, v):
                continue
            try:
                cover, _ = _construct(n, faults, Terminals(x, v, u, y))
            except InternalError:
                cover = None
            if cover is not None:
                return cover.p1 + cover.p2
            tries += 1
            if tries >= COVER_TRIES:
                return None
    return None


def _bh1_path(local: FaultSet, x, y, excluded):
    keep = [v for v in vertices(1) if v not in excluded]
    for direction in (1, -1):
        path = [x]
        while len(path) < len(keep):
            nxt = ((path[-1][0] + direction) % 4,)
            if nxt in excluded or local.is_faulty(path[-1], nxt):
                break
            path.append(nxt)
        if len(path) == len(keep) and path[-1] == y:
            return tuple(path)
    return None
