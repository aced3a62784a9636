"""Tenon chains: runs of twisted 4-cycles along the ring layout of BH_2.

BH_2 splits into eight twin pairs arranged on a ring; any two consecutive
pairs induce a 4-cycle (a K_{2,2}).  Going clockwise the pairs are

    O0, E3, O3, E2, O2, E1, O1, E0

with E_j = {(0, j), (2, j)} and O_j = {(1, j), (3, j)}.  A chain T_m(u; v)
is the m cells strictly between u's pair and v's pair plus the two 2-paths
tying u and v to them; T_m(u, x; v, y) keeps u's and v's pairs as cells of
their own, giving m + 2 cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import InputError, InternalError
from .instance import Path
from .topology import Edge, Vertex, canon_edge, twin, validate_vertex


def _pair(j: int, odd: bool) -> Tuple[Vertex, Vertex]:
    return ((1, j), (3, j)) if odd else ((0, j), (2, j))


RING: Tuple[Tuple[Vertex, Vertex], ...] = tuple(
    _pair(-((p + 1) // 2) % 4, odd=(p % 2 == 0)) for p in range(8))


def ring_position(v: Vertex) -> int:
    for p, pair in enumerate(RING):
        if v in pair:
            return p
    raise InputError(f"{v} is not a vertex of BH_2")


def _cell_edges(a: Tuple[Vertex, Vertex], b: Tuple[Vertex, Vertex]) -> Tuple[Edge, ...]:
    return tuple(sorted(canon_edge(x, y) for x in a for y in b))


@dataclass(frozen=True)
class TenonChain:
    """``pairs`` lists the twin pairs whose consecutive members form the cells.

    Single chains (``x is None``): u and v hang off the first and last pair.
    Double chains: the first pair is {u, x} and the last is {v, y}.
    """

    m: int
    u: Vertex
    v: Vertex
    x: Optional[Vertex]
    y: Optional[Vertex]
    pairs: Tuple[Tuple[Vertex, Vertex], ...]

    @property
    def double(self) -> bool:
        return self.x is not None

    def cells(self) -> List[Tuple[Edge, ...]]:
        return [_cell_edges(a, b) for a, b in zip(self.pairs, self.pairs[1:])]

    def attachments(self) -> List[Edge]:
        if self.double:
            return []
        first, last = self.pairs[0], self.pairs[-1]
        return sorted([canon_edge(self.u, w) for w in first] + [canon_edge(self.v, w) for w in last])

    def edges(self) -> List[Edge]:
        out = list(self.attachments())
        for c in self.cells():
            out.extend(c)
        return sorted(out)

    def vertices(self) -> List[Vertex]:
        vs = [w for p in self.pairs for w in p]
        if not self.double:
            vs += [self.u, self.v]
        return sorted(vs)

    def cell_of(self, e: Edge) -> Optional[int]:
        e = canon_edge(*e)
        for i, c in enumerate(self.cells()):
            if e in c:
                return i
        return None


def tenon_chain(u, v, x=None, y=None) -> TenonChain:
    """The chain running clockwise from u to v (and from x to y if given)."""
    u, v = validate_vertex(u, 2), validate_vertex(v, 2)
    p, q = ring_position(u), ring_position(v)
    gap = (q - p) % 8
    m = gap - 2
    if not 1 <= m <= 6:
        raise InputError(f"no tenon chain with 1 <= m <= 6 runs clockwise from {u} to {v}")
    if x is None and y is None:
        pairs = tuple(RING[(p + i) % 8] for i in range(1, gap))
        return TenonChain(m, u, v, None, None, pairs)
    if x is None or y is None:
        raise InputError("give both x and y or neither")
    x, y = validate_vertex(x, 2), validate_vertex(y, 2)
    if x != twin(u) or y != twin(v):
        raise InputError("x must be the twin of u and y the twin of v")
    if m == 6:
        raise InputError("a double chain with m = 6 would reuse a pair")
    pairs = tuple(RING[(p + i) % 8] for i in range(gap + 1))
    return TenonChain(m, u, v, x, y, pairs)


def all_chains(ms=(1, 3, 5), double: bool = False):
    """Every chain with the given lengths embedded in BH_2."""
    for m in ms:
        for p in range(8):
            q = (p + m + 2) % 8
            for u in RING[p]:
                for v in RING[q]:
                    if double:
                        if m + 3 <= 8:
                            yield tenon_chain(u, v, twin(u), twin(v))
                    else:
                        yield tenon_chain(u, v)


def tenon_ham_path(chain: TenonChain, f: Optional[Edge] = None) -> Path:
    """Hamiltonian u -> v path of a single chain T_m(u; v) avoiding edge ``f``.

    Pairs are walked two at a time: entering pair i at one vertex, the path
    zigzags i -> i+1 -> i -> i+1 and leaves towards pair i+2.  The free
    choices are which vertex of each pair is visited first; the first choice
    vector (in lexicographic order) whose edges avoid ``f`` is returned.
    """
    if chain.double:
        raise InputError("tenon_ham_path takes a single chain T_m(u; v)")
    if chain.m % 2 == 0:
        raise InputError("u and v are on the same side; m must be odd")
    fe = None
    if f is not None:
        fe = canon_edge(*f)
        if fe not in set(chain.edges()):
            raise InputError(f"{f} is not an edge of the chain")
    pairs = chain.pairs
    blocks = len(pairs) // 2
    for picks in itertools.product((0, 1), repeat=2 * blocks):
        path = [chain.u]
        for b in range(blocks):
            lo, hi = pairs[2 * b], pairs[2 * b + 1]
            e, g = picks[2 * b], picks[2 * b + 1]
            path += [lo[e], hi[g], lo[1 - e], hi[1 - g]]
        path.append(chain.v)
        if fe is None or all(canon_edge(a, b) != fe for a, b in zip(path, path[1:])):
            return tuple(path)
    raise InternalError(f"no Hamiltonian path of {chain} avoids {f}")


def tenon_dpc(chain: TenonChain, e: Optional[Edge], f: Optional[Edge]) -> Tuple[Path, Path]:
    """Disjoint u -> v and x -> y paths covering a double chain, avoiding e and f.

    Both paths take one vertex from every pair.  Inside a cell holding a fault
    the matching between the two pairs is forced (the one missing the fault);
    the last fault-free cell absorbs the parity so that u's path ends at v.
    """
    if not chain.double:
        raise InputError("tenon_dpc takes a double chain T_m(u, x; v, y)")
    if chain.m % 2 == 0:
        raise InputError("u and v are on the same side; m must be odd")
    faults = [canon_edge(*g) for g in (e, f) if g is not None]
    cells = chain.cells()
    where = []
    for g in faults:
        c = chain.cell_of(g)
        if c is None:
            raise InputError(f"{g} is not an edge of the chain")
        where.append(c)
    if len(where) == 2 and where[0] == where[1]:
        raise InputError("e and f lie in the same twisted 4-cycle")
    bad = {c: g for c, g in zip(where, faults)}
    free = [c for c in range(len(cells)) if c not in bad]
    last_free = free[-1]
    pairs = chain.pairs

    def step(c: int, cur: Vertex, pick: int) -> Vertex:
        return pairs[c + 1][pick]

    def forced(c: int, cur: Vertex) -> Vertex:
        other = pairs[c][1] if cur == pairs[c][0] else pairs[c][0]
        for nxt in pairs[c + 1]:
            nother = pairs[c + 1][1] if nxt == pairs[c + 1][0] else pairs[c + 1][0]
            if bad[c] not in (canon_edge(cur, nxt), canon_edge(other, nother)):
                return nxt
        raise InternalError("both matchings of a cell are faulty")

    def walk(choice_at_last: int) -> List[Vertex]:
        cur = chain.u
        out = [cur]
        for c in range(len(cells)):
            if c in bad:
                cur = forced(c, cur)
            elif c == last_free:
                cur = step(c, cur, choice_at_last)
            else:
                # keep the same slot (lo stays lo) on fault-free cells
                cur = step(c, cur, pairs[c].index(cur))
            out.append(cur)
        return out

    for choice in (0, 1):
        pu = walk(choice)
        if pu[-1] == chain.v:
            px = [pair[1] if w == pair[0] else pair[0] for w, pair in zip(pu, pairs)]
            return tuple(pu), tuple(px)
    raise InternalError("parity adjustment failed")
