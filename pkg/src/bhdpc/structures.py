"""Auxiliary structures inside one block B^i of a split of BH_n - F.

The construction needs them when two terminals of one partite set share a
block and the covering paths must leave and re-enter that block.

* ``CycleStructure``: a 4-cycle <a, b, c, d> (a = twin(c) even, b = twin(d)
  odd), a vertex u adjacent to b and d, and a path P from u to a through
  every vertex of B^i except b, c, d, together with fault conditions on the
  cross edges at a, b, c, d and u.
* ``TwinPathStructure``: even u, a = twin(c) and an odd common neighbour b of
  a and c, with disjoint paths P: u -> t2 and Q: c -> t1 spanning B^i where Q
  opens with <c, b, a>, again with cross-edge fault conditions.

Both finders work in a frame where the split runs along the last coordinate
(see ``axis_frame``).  A BH_2 block is scanned directly.  A larger block is
split once more along one of its own outer dimensions; the structure is
found recursively in the sub-block that holds the action, and one edge of
its path is cut to thread Hamiltonian paths of the other three sub-blocks
in between.  Every candidate is checked literally before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

from .basecase import iter_pair_structures
from .errors import InputError, InternalError
from .hampath import subcube_path
from .instance import Path, path_violations
from .topology import (FaultSet, Subcube, Vertex, axis_frame, common_neighbors, dim_neighbors,
                       edge_dimension, is_adjacent, neighbors, side, split, twin, validate_vertex)

VertexTest = Optional[Callable[[Vertex], bool]]


@dataclass(frozen=True)
class CycleStructure:
    a: Vertex
    c: Vertex
    b: Vertex
    d: Vertex
    u: Vertex
    P: Path
    k: int
    i: int

    def mapped(self, fn) -> "CycleStructure":
        return replace(self, a=fn(self.a), c=fn(self.c), b=fn(self.b), d=fn(self.d),
                       u=fn(self.u), P=tuple(fn(v) for v in self.P))


@dataclass(frozen=True)
class TwinPathStructure:
    u: Vertex
    a: Vertex
    c: Vertex
    b: Vertex
    P: Path
    Q: Path
    k: int
    i: int
    t1: Vertex
    t2: Vertex

    def mapped(self, fn) -> "TwinPathStructure":
        return replace(self, u=fn(self.u), a=fn(self.a), c=fn(self.c), b=fn(self.b),
                       P=tuple(fn(v) for v in self.P), Q=tuple(fn(v) for v in self.Q),
                       t1=fn(self.t1), t2=fn(self.t2))


Structure = Union[CycleStructure, TwinPathStructure]


# --------------------------------------------------------------------------
# shared helpers


def _good(faults: FaultSet, v: Vertex) -> bool:
    """At most one faulty edge in every dimension at v."""
    return all(faults.faulty_at(v, j) < 2 for j in range(faults.n))


def _live_cross(faults: FaultSet, v: Vertex, dim: int, inside: Optional[Subcube] = None):
    """Fault-free dim-neighbours of v (optionally restricted to a subcube), sorted."""
    return sorted(w for w in dim_neighbors(v, dim)
                  if not faults.is_faulty(v, w) and (inside is None or w in inside))


def _outer_dims(blk: Subcube, skip: int, faults: FaultSet) -> List[int]:
    """Outer free dimensions of the block other than ``skip``, most faults inside first."""
    dims = [j for j in blk.free if j not in (0, skip)]

    def inside(j):
        return sum(1 for u, v in faults.edges if u in blk and v in blk and edge_dimension(u, v) == j)

    return sorted(dims, key=lambda j: (-inside(j), j))


def relay(faults: FaultSet, blocks: Sequence[Subcube], dim: int, start: Vertex,
          end: Vertex) -> Optional[Path]:
    """A start -> end path covering ``blocks`` one after another.

    Each block is crossed by a Hamiltonian path and consecutive blocks are
    joined by a fault-free dim-edge leaving the previous block's exit.
    Exits are tried in lexicographic order.
    """
    first = blocks[0]
    if len(blocks) == 1:
        return subcube_path(first, faults, start, end)
    for x in sorted(first.vertices()):
        if side(x) == side(start) or x == start:
            continue
        ys = _live_cross(faults, x, dim, blocks[1])
        if len(blocks) == 2:
            ys = [y for y in ys if y != end]
        if not ys:
            continue
        head = subcube_path(first, faults, start, x)
        if head is None:
            continue
        for y in ys:
            tail = relay(faults, blocks[1:], dim, y, end)
            if tail is not None:
                return head + tail
    return None


def _odd_edges(path: Path, start: int = 1):
    """(position, odd vertex, even successor) for consecutive pairs along the path."""
    for pos in range(start, len(path) - 1):
        if side(path[pos]) == 1:
            yield pos, path[pos], path[pos + 1]


# --------------------------------------------------------------------------
# the 4-cycle structure


def _cycle_candidates(space: Subcube, faults: FaultSet, i: int,
                      extra: VertexTest) -> Iterator[CycleStructure]:
    n = faults.n
    ax = n - 1
    blk = space.restrict(ax, i)
    if blk.dim == 2:
        yield from _cycle_base(blk, faults, i, extra)
        return
    for k2 in _outer_dims(blk, ax, faults):
        sub = [blk.restrict(k2, j) for j in range(4)]
        for j0 in range(4):
            H = space.restrict(k2, j0)
            for s in _cycle_candidates(H, faults, i, extra):
                for pos, a0, u0 in _odd_edges(s.P):
                    for a1 in _live_cross(faults, u0, k2):
                        for u3 in _live_cross(faults, a0, k2):
                            mid = relay(faults, [sub[(j0 + 3) % 4], sub[(j0 + 2) % 4],
                                                 sub[(j0 + 1) % 4]], k2, u3, a1)
                            if mid is not None:
                                yield replace(s, P=s.P[:pos + 1] + mid + s.P[pos + 1:])


def _cycle_base(blk: Subcube, faults: FaultSet, i: int, extra: VertexTest):
    ax = faults.n - 1
    verts = sorted(blk.vertices())
    for a in (v for v in verts if side(v) == 0):
        c = twin(a)
        if not any(faults.faulty_at(x, ax) == 0 for x in dim_neighbors(a, ax)):
            continue
        for b in sorted(w for w in neighbors(a) if w in blk):
            d = twin(b)
            if faults.is_faulty(c, d) or faults.faulty_at(b, ax) or faults.faulty_at(d, ax) > 1:
                continue
            for u in sorted(w for w in common_neighbors(b, d) if w in blk and w not in (a, c)):
                if not _good(faults, u) or (extra is not None and not extra(u)):
                    continue
                P = subcube_path(blk, faults, u, a, excluded=(b, c, d))
                if P is not None:
                    yield CycleStructure(a, c, b, d, u, P, ax, i)


def find_cycle_structure(n: int, faults: FaultSet, k: int, i: int) -> CycleStructure:
    """A 4-cycle structure in block i of the split along dimension k."""
    _check_args(n, faults, k, i)
    frame = axis_frame(n, k)
    local = frame.map_faults(faults)
    for cand in _cycle_candidates(Subcube(n), local, i, None):
        s = replace(cand.mapped(frame.inv), k=k)
        if not check_structure(s, faults):
            return s
    raise InternalError(f"no 4-cycle structure in block {i} of dimension {k} for F={sorted(faults)}")


# --------------------------------------------------------------------------
# the twin-path structure


def _twin_candidates(space: Subcube, faults: FaultSet, i: int, t1: Vertex, t2: Vertex,
                     extra: VertexTest) -> Iterator[TwinPathStructure]:
    n = faults.n
    ax = n - 1
    blk = space.restrict(ax, i)
    if blk.dim == 2:
        yield from _twin_base(blk, faults, i, t1, t2, extra)
        return
    for k1 in _outer_dims(blk, ax, faults):
        j0 = t1[k1]
        r = (t2[k1] - j0) % 4
        rel = [blk.restrict(k1, j0 + d) for d in range(4)]
        H = space.restrict(k1, j0)
        if r == 0:
            yield from _twin_same(faults, H, rel, k1, i, t1, t2, extra)
        elif r == 1:
            yield from _twin_next(faults, H, rel, k1, i, t1, t2, extra)
        elif r == 2:
            yield from _twin_opposite(faults, H, rel, k1, i, t1, t2, extra)
        else:
            yield from _twin_previous(faults, H, rel, k1, i, t1, t2, extra)


def _twin_same(faults, H, rel, k1, i, t1, t2, extra):
    """t1 and t2 share a sub-block: cut an edge of P (or of Q past <c, b, a>)
    and detour through the other three sub-blocks."""
    for s in _twin_candidates(H, faults, i, t1, t2, extra):
        for which, path, first in (("P", s.P, 1), ("Q", s.Q, 3)):
            for pos, a0, u0 in _odd_edges(path, first):
                for a1 in _live_cross(faults, u0, k1):
                    for u3 in _live_cross(faults, a0, k1):
                        mid = relay(faults, [rel[3], rel[2], rel[1]], k1, u3, a1)
                        if mid is not None:
                            longer = path[:pos + 1] + mid + path[pos + 1:]
                            yield replace(s, **{which: longer})


def _exits(faults, sub: Subcube, avoid: Vertex):
    return [v for v in sorted(sub.vertices()) if side(v) == 1 and v != avoid]


def _twin_next(faults, H, rel, k1, i, t1, t2, extra):
    """t2 one sub-block ahead: the recursive P ends at a0, then runs through
    the sub-blocks behind t1's and finishes in t2's."""
    for a0 in _exits(faults, rel[0], t1):
        for u3 in _live_cross(faults, a0, k1, rel[3]):
            tail = relay(faults, [rel[3], rel[2], rel[1]], k1, u3, t2)
            if tail is None:
                continue
            for s in _twin_candidates(H, faults, i, t1, a0, extra):
                yield replace(s, P=s.P + tail, t2=t2)
                break


def _starts(faults, sub: Subcube, extra: VertexTest):
    return [v for v in sorted(sub.vertices())
            if side(v) == 0 and _good(faults, v) and (extra is None or extra(v))]


def _twin_opposite(faults, H, rel, k1, i, t1, t2, extra):
    """t2 two sub-blocks away: P starts near t2, is cut at a2u2, and the gap
    is bridged through the sub-block before, the recursive part and the
    sub-block after."""
    for u in _starts(faults, rel[2], extra):
        P2 = subcube_path(rel[2], faults, u, t2)
        if P2 is None:
            continue
        for pos, a2, u2 in _odd_edges(P2):
            for u1 in _live_cross(faults, a2, k1, rel[1]):
                for a3 in _live_cross(faults, u2, k1, rel[3]):
                    for a0 in _exits(faults, rel[0], t1):
                        for u3 in _live_cross(faults, a0, k1, rel[3]):
                            P3 = subcube_path(rel[3], faults, u3, a3)
                            if P3 is None:
                                continue
                            for s in _twin_candidates(H, faults, i, t1, a0, extra):
                                for a1 in _live_cross(faults, s.u, k1, rel[1]):
                                    P1 = subcube_path(rel[1], faults, u1, a1)
                                    if P1 is not None:
                                        whole = P2[:pos + 1] + P1 + s.P + P3 + P2[pos + 1:]
                                        yield replace(s, u=u, P=whole, t2=t2)
                                break


def _twin_previous(faults, H, rel, k1, i, t1, t2, extra):
    """t2 one sub-block behind: P starts two sub-blocks ahead, passes the
    next one, the recursive part, and ends in t2's sub-block."""
    for u in _starts(faults, rel[2], extra):
        for a0 in _exits(faults, rel[0], t1):
            for u3 in _live_cross(faults, a0, k1, rel[3]):
                P3 = subcube_path(rel[3], faults, u3, t2)
                if P3 is None:
                    continue
                for s in _twin_candidates(H, faults, i, t1, a0, extra):
                    for a1 in _live_cross(faults, s.u, k1, rel[1]):
                        head = relay(faults, [rel[2], rel[1]], k1, u, a1)
                        if head is not None:
                            yield replace(s, u=u, P=head + s.P + P3, t2=t2)
                    break


def _twin_base(blk: Subcube, faults: FaultSet, i: int, t1: Vertex, t2: Vertex,
               extra: VertexTest):
    ax = faults.n - 1
    up = blk.up

    def filt(a, c, b, u):
        A, B, U = up(a), up(b), up(u)
        if not any(faults.faulty_at(x, ax) == 0 for x in dim_neighbors(A, ax)):
            return False
        if faults.faulty_at(B, ax) > 1:
            return False
        return _good(faults, U) and (extra is None or extra(U))

    local = blk.local_faults(faults)
    for ps in iter_pair_structures(local, blk.down(t1), blk.down(t2), filt=filt):
        yield TwinPathStructure(up(ps.u), up(ps.a), up(ps.c), up(ps.b),
                                tuple(map(up, ps.P)), tuple(map(up, ps.Q)), ax, i, t1, t2)


def find_twin_path_structure(n: int, faults: FaultSet, k: int, i: int, t1, t2) -> TwinPathStructure:
    """A twin-path structure for terminals t1, t2 (odd, in block i of the
    split along dimension k)."""
    _check_args(n, faults, k, i)
    t1, t2 = validate_vertex(t1, n), validate_vertex(t2, n)
    sp = split(n, k)
    if t1 == t2 or side(t1) != 1 or side(t2) != 1:
        raise InputError("t1, t2 must be distinct odd vertices")
    if sp.part_of(t1) != i or sp.part_of(t2) != i:
        raise InputError(f"t1 and t2 must lie in block {i}")
    frame = axis_frame(n, k)
    local = frame.map_faults(faults)
    for cand in _twin_candidates(Subcube(n), local, i, frame(t1), frame(t2), None):
        s = replace(cand.mapped(frame.inv), k=k)
        if not check_structure(s, faults):
            return s
    raise InternalError(
        f"no twin-path structure in block {i} of dimension {k} for F={sorted(faults)}, t1={t1}, t2={t2}")


def _check_args(n: int, faults: FaultSet, k: int, i: int) -> None:
    if n < 3:
        raise InputError("the structures live in blocks of BH_n with n >= 3")
    if faults.n != n:
        raise InputError("fault set dimension does not match n")
    if not 0 <= k < n or not 0 <= i < 4:
        raise InputError(f"bad split dimension {k} or block index {i}")


# --------------------------------------------------------------------------
# checker


def check_structure(s: Structure, faults: FaultSet, context: Optional[Tuple[Vertex, Vertex]] = None
                    ) -> List[str]:
    """Every stated condition of the structure, checked literally.

    ``context`` optionally overrides the (t1, t2) pair of a twin-path
    structure.  Returns the list of violations (empty means valid).
    """
    n, k = faults.n, s.k
    block = set(split(n, k).part(s.i))
    out: List[str] = []

    def cross_clean(v):  # a k-neighbour of v (and of its twin) with no faulty k-edge
        return any(x in dim_neighbors(twin(v), k) and faults.faulty_at(x, k) == 0
                   for x in dim_neighbors(v, k))

    if s.a != twin(s.c):
        out.append("a is not the twin of c")
    if side(s.a) or side(s.c) or side(s.u):
        out.append("u, a, c must be even")
    if side(s.b) != 1:
        out.append("b must be odd")
    if s.u in (s.a, s.c):
        out.append("u coincides with a or c")
    if not (is_adjacent(s.a, s.b) and is_adjacent(s.c, s.b)):
        out.append("b is not a common neighbour of a and c")
    if not cross_clean(s.a):
        out.append("no fault-free k-neighbour shared by a and c")
    bad_u = [j for j in range(n) if faults.faulty_at(s.u, j) >= 2]
    if bad_u:
        out.append(f"u has two faulty edges in dimension {bad_u[0]}")

    if isinstance(s, CycleStructure):
        named = (s.a, s.b, s.c, s.d, s.u)
        if s.b != twin(s.d) or side(s.d) != 1:
            out.append("b is not the twin of d")
        if not (is_adjacent(s.c, s.d) and is_adjacent(s.d, s.a)):
            out.append("<a, b, c, d> is not a 4-cycle")
        if faults.faulty_at(s.b, k):
            out.append("b has a faulty k-edge")
        if faults.faulty_at(s.d, k) > 1:
            out.append("both k-edges of d are faulty")
        if faults.is_faulty(s.c, s.d):
            out.append("edge cd is faulty")
        if s.u not in common_neighbors(s.b, s.d):
            out.append("u is not adjacent to both b and d")
        if not s.P or s.P[0] != s.u or s.P[-1] != s.a:
            out.append("P does not run from u to a")
        out += [f"P: {x}" for x in path_violations(s.P, faults)]
        if set(s.P) != block - {s.b, s.c, s.d}:
            out.append("coverage")
    else:
        t1, t2 = context if context is not None else (s.t1, s.t2)
        named = (s.a, s.b, s.c, s.u, t1, t2)
        if s.b in (t1, t2):
            out.append("b collides with terminal")
        if faults.faulty_at(s.b, k) > 1:
            out.append("both k-edges of b are faulty")
        if not s.P or s.P[0] != s.u or s.P[-1] != t2:
            out.append("P does not run from u to t2")
        if not s.Q or s.Q[-1] != t1:
            out.append("Q does not end at t1")
        if tuple(s.Q[:3]) != (s.c, s.b, s.a):
            out.append("Q does not open with <c, b, a>")
        out += [f"P: {x}" for x in path_violations(s.P, faults)]
        out += [f"Q: {x}" for x in path_violations(s.Q, faults)]
        if set(s.P) & set(s.Q):
            out.append("P and Q share a vertex")
        if set(s.P) | set(s.Q) != block:
            out.append("coverage")
    outside = [v for v in named if v not in block]
    if outside:
        out.append(f"{outside[0]} lies outside block {s.i}")
    return out
