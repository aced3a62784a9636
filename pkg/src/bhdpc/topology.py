"""Coordinate model of the balanced hypercube BH_n.

A vertex is a tuple ``(a0, a1, ..., a_{n-1})`` over ``{0, 1, 2, 3}``; ``a0`` is
the inner index and decides the partite side (``a0 % 2``).  Vertices are
ordered lexicographically everywhere, which makes every scan in the package
deterministic.
"""

from __future__ import annotations

import itertools
import threading
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import InputError, InternalError, NotAdjacent

Vertex = Tuple[int, ...]
Edge = Tuple[Vertex, Vertex]  # endpoints in lexicographic order


def validate_vertex(v: Sequence[int], n: Optional[int] = None) -> Vertex:
    v = tuple(v)
    if not v:
        raise InputError("vertex must have at least one coordinate")
    if n is not None and len(v) != n:
        raise InputError(f"vertex {v} has {len(v)} coordinates, expected {n}")
    for x in v:
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x <= 3:
            raise InputError(f"vertex {v}: coordinate {x!r} not in 0..3")
    return v


def side(v: Vertex) -> int:
    return v[0] & 1


@lru_cache(maxsize=None)
def _neighbors(v: Vertex) -> Tuple[Vertex, ...]:
    a0 = v[0]
    sign = 1 if a0 % 2 == 0 else -1
    out = []
    for inner in ((a0 + 1) % 4, (a0 - 1) % 4):
        out.append((inner,) + v[1:])
        for i in range(1, len(v)):
            w = list(v)
            w[0] = inner
            w[i] = (v[i] + sign) % 4
            out.append(tuple(w))
    return tuple(sorted(out))


def neighbors(v: Sequence[int], n: Optional[int] = None) -> Tuple[Vertex, ...]:
    """The 2n neighbours of ``v``, in lexicographic order."""
    return _neighbors(validate_vertex(v, n))


@lru_cache(maxsize=None)
def _neighbors_by_dim(v: Vertex) -> Tuple[Tuple[Vertex, Vertex], ...]:
    a0 = v[0]
    sign = 1 if a0 % 2 == 0 else -1
    lo, hi = sorted(((a0 + 1) % 4, (a0 - 1) % 4))
    out = [((lo,) + v[1:], (hi,) + v[1:])]
    for i in range(1, len(v)):
        pair = []
        for inner in (lo, hi):
            w = list(v)
            w[0] = inner
            w[i] = (v[i] + sign) % 4
            pair.append(tuple(w))
        out.append(tuple(pair))
    return tuple(out)


def dim_neighbors(v: Vertex, dim: int) -> Tuple[Vertex, Vertex]:
    """The two ``dim``-dimension neighbours of ``v`` (they are twins)."""
    return _neighbors_by_dim(v)[dim]


def is_adjacent(u: Vertex, v: Vertex) -> bool:
    return len(u) == len(v) and v in _neighbors(u)


def edge_dimension(u: Vertex, v: Vertex) -> int:
    u = validate_vertex(u)
    v = validate_vertex(v, len(u))
    if not is_adjacent(u, v):
        raise NotAdjacent(f"{u} and {v} are not adjacent")
    diff = [i for i in range(1, len(u)) if u[i] != v[i]]
    return diff[0] if diff else 0


def canon_edge(u: Vertex, v: Vertex) -> Edge:
    return (u, v) if u <= v else (v, u)


def twin(v: Vertex) -> Vertex:
    """The backup vertex sharing the whole neighbourhood of ``v``."""
    return ((v[0] + 2) % 4,) + tuple(v[1:])


def common_neighbors(u: Vertex, v: Vertex) -> Tuple[Vertex, ...]:
    nv = set(_neighbors(tuple(v)))
    return tuple(w for w in _neighbors(tuple(u)) if w in nv)


def distance(u: Vertex, v: Vertex) -> int:
    u, v = tuple(u), tuple(v)
    if u == v:
        return 0
    seen = {u}
    frontier = deque([(u, 0)])
    while frontier:
        x, d = frontier.popleft()
        for y in _neighbors(x):
            if y == v:
                return d + 1
            if y not in seen:
                seen.add(y)
                frontier.append((y, d + 1))
    raise InternalError("BH_n is connected; BFS cannot miss a vertex")


@lru_cache(maxsize=None)
def vertices(n: int) -> Tuple[Vertex, ...]:
    if n < 1:
        raise InputError("n must be at least 1")
    return tuple(itertools.product(range(4), repeat=n))


@lru_cache(maxsize=None)
def edges(n: int) -> Tuple[Edge, ...]:
    out = set()
    for v in vertices(n):
        for w in _neighbors(v):
            out.add(canon_edge(v, w))
    return tuple(sorted(out))


def edges_of_dim(n: int, dim: int) -> Tuple[Edge, ...]:
    return tuple(e for e in edges(n) if edge_dimension(*e) == dim)


def incident_edges(v: Vertex) -> Tuple[Edge, ...]:
    return tuple(canon_edge(v, w) for w in _neighbors(v))


# --------------------------------------------------------------------------
# fault sets


class FaultSet:
    """An immutable set of faulty edges of BH_n with per-dimension tallies."""

    __slots__ = ("n", "edges", "per_dimension", "_hash")

    def __init__(self, n: int, edge_list: Iterable[Sequence[Sequence[int]]] = ()):
        self.n = n
        out = set()
        for e in edge_list:
            if len(e) != 2:
                raise InputError(f"edge {e!r} must have two endpoints")
            u = validate_vertex(e[0], n)
            v = validate_vertex(e[1], n)
            if not is_adjacent(u, v):
                raise NotAdjacent(f"fault {u}-{v} is not an edge of BH_{n}")
            out.add(canon_edge(u, v))
        self.edges = frozenset(out)
        self.per_dimension = Counter(edge_dimension(*e) for e in self.edges)
        self._hash = hash((n, self.edges))

    def __contains__(self, e) -> bool:
        u, v = e
        return canon_edge(tuple(u), tuple(v)) in self.edges

    def is_faulty(self, u: Vertex, v: Vertex) -> bool:
        return canon_edge(u, v) in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.edges))

    def __eq__(self, other) -> bool:
        return isinstance(other, FaultSet) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FaultSet(n={self.n}, edges={sorted(self.edges)})"

    def count(self, dim: int) -> int:
        return self.per_dimension.get(dim, 0)

    def faulty_at(self, v: Vertex, dim: Optional[int] = None) -> int:
        """Number of faulty edges at ``v`` (restricted to one dimension if given)."""
        if dim is None:
            return sum(1 for w in _neighbors(v) if canon_edge(v, w) in self.edges)
        return sum(1 for w in dim_neighbors(v, dim) if canon_edge(v, w) in self.edges)

    def mapped(self, fn, n: Optional[int] = None) -> "FaultSet":
        return FaultSet(self.n if n is None else n, [(fn(u), fn(v)) for u, v in self.edges])


# --------------------------------------------------------------------------
# subcubes


@dataclass(frozen=True)
class Subcube:
    """Vertices of BH_n with some outer coordinates held fixed.

    The induced subgraph is isomorphic to BH_m (m = n - #fixed) by keeping the
    free coordinates in order.
    """

    n: int
    fixed: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        for i, _ in self.fixed:
            if i == 0:
                raise InputError("the inner index cannot be fixed")

    @property
    def free(self) -> Tuple[int, ...]:
        held = {i for i, _ in self.fixed}
        return tuple(i for i in range(self.n) if i not in held)

    @property
    def dim(self) -> int:
        return self.n - len(self.fixed)

    def restrict(self, index: int, value: int) -> "Subcube":
        return Subcube(self.n, tuple(sorted(self.fixed + ((index, value % 4),))))

    def __contains__(self, v) -> bool:
        return all(v[i] == c for i, c in self.fixed)

    def vertices(self) -> Tuple[Vertex, ...]:
        return _subcube_vertices(self)

    def down(self, v: Vertex) -> Vertex:
        return tuple(v[i] for i in self.free)

    def up(self, w: Vertex) -> Vertex:
        out = [0] * self.n
        for i, c in self.fixed:
            out[i] = c
        for i, x in zip(self.free, w):
            out[i] = x
        return tuple(out)

    def local_faults(self, faults: FaultSet) -> FaultSet:
        """Faults inside the subcube, relabelled to BH_m coordinates."""
        return FaultSet(
            self.dim,
            [(self.down(u), self.down(v)) for u, v in faults.edges if u in self and v in self],
        )

    def inner_faults(self, faults: FaultSet) -> List[Edge]:
        return sorted(e for e in faults.edges if e[0] in self and e[1] in self)


@lru_cache(maxsize=4096)
def _subcube_vertices(sc: Subcube) -> Tuple[Vertex, ...]:
    return tuple(sc.up(w) for w in vertices(sc.dim))


# --------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True)
class Automorphism:
    n: int
    forward: Dict[Vertex, Vertex] = field(repr=False, compare=False)
    inverse: Dict[Vertex, Vertex] = field(repr=False, compare=False)
    description: str = "composite"

    def __call__(self, v: Vertex) -> Vertex:
        return self.forward[v]

    def inv(self, v: Vertex) -> Vertex:
        return self.inverse[v]

    def then(self, other: "Automorphism") -> "Automorphism":
        """``other`` applied after ``self``."""
        fwd = {v: other.forward[w] for v, w in self.forward.items()}
        return Automorphism(self.n, fwd, {w: v for v, w in fwd.items()},
                            f"{self.description};{other.description}")

    def inverted(self) -> "Automorphism":
        return Automorphism(self.n, self.inverse, self.forward, f"inverse({self.description})")

    def map_faults(self, faults: FaultSet) -> FaultSet:
        return faults.mapped(self.forward.__getitem__)

    def violations(self) -> List[str]:
        out = []
        if len(self.forward) != 4 ** self.n or set(self.forward.values()) != set(vertices(self.n)):
            out.append("not a permutation")
        for v, w in self.forward.items():
            if self.inverse.get(w) != v:
                out.append(f"inverse mismatch at {v}")
                break
        for u, v in edges(self.n):
            if not is_adjacent(self.forward[u], self.forward[v]):
                out.append(f"edge {u}-{v} not preserved")
                break
        return out


def _from_fn(n: int, fn, description: str) -> Automorphism:
    fwd = {v: fn(v) for v in vertices(n)}
    return Automorphism(n, fwd, {w: v for v, w in fwd.items()}, description)


def identity(n: int) -> Automorphism:
    return _from_fn(n, lambda v: v, "identity")


@lru_cache(maxsize=None)
def outer_translate(n: int, j: int, c: int) -> Automorphism:
    """Shift outer coordinate ``j`` by ``c``; rotates the blocks B^i -> B^{i+c}."""
    if not 1 <= j < n:
        raise InputError(f"outer_translate needs 1 <= j < n, got j={j}")
    c %= 4

    def fn(v):
        w = list(v)
        w[j] = (w[j] + c) % 4
        return tuple(w)

    return _from_fn(n, fn, f"outer-translate({j},{c})")


@lru_cache(maxsize=None)
def inner_translate_2(n: int) -> Automorphism:
    return _from_fn(n, twin, "inner-translate-2")


@lru_cache(maxsize=None)
def reflect(n: int) -> Automorphism:
    """(a0, a1, ...) -> (a0+1, -a1, ..., -a_{n-1}).

    Swaps the partite sides and maps block B^i to B^{-i} along every outer
    dimension.
    """
    return _from_fn(n, lambda v: ((v[0] + 1) % 4,) + tuple((-x) % 4 for x in v[1:]), "reflect")


@lru_cache(maxsize=None)
def outer_swap(n: int, i: int, j: int) -> Automorphism:
    if not (1 <= i < n and 1 <= j < n):
        raise InputError("outer_swap needs two outer dimensions")

    def fn(v):
        w = list(v)
        w[i], w[j] = w[j], w[i]
        return tuple(w)

    return _from_fn(n, fn, f"outer-swap({i},{j})")


_exchange_lock = threading.Lock()
_exchange_memo: Dict[Tuple[int, int], Automorphism] = {}


def dimension_exchange(n: int, j: int) -> Automorphism:
    """An automorphism mapping E_0 onto E_j (and E_j onto E_0).

    Found by backtracking: the all-zero vertex is pinned, every dimension-d
    neighbour pair of an assigned vertex must land on the sigma(d) pair of its
    image (sigma swaps 0 and j), and twins map to twins.  Memoized.
    """
    if not 0 <= j < n:
        raise InputError(f"dimension {j} out of range for n={n}")
    if j == 0:
        return identity(n)
    key = (n, j)
    with _exchange_lock:
        if key not in _exchange_memo:
            perm = _search_exchange(n, j)
            auto = Automorphism(n, perm, {w: v for v, w in perm.items()},
                                f"dimension-exchange({j})")
            bad = auto.violations()
            if bad:
                raise InternalError(f"dimension exchange search produced a bad map: {bad}")
            _exchange_memo[key] = auto
        return _exchange_memo[key]


def _search_exchange(n: int, j: int, budget: int = 10_000_000) -> Dict[Vertex, Vertex]:
    sigma = list(range(n))
    sigma[0], sigma[j] = j, 0
    origin = (0,) * n
    expansions = 0

    def propagate(assign: Dict[Vertex, Vertex], queue: List[Vertex]):
        """Extend with forced images; return (assign, pending-choices) or None."""
        rev = {w: v for v, w in assign.items()}
        while queue:
            v = queue.pop()
            w = assign[v]
            for d in range(n):
                src = dim_neighbors(v, d)
                dst = dim_neighbors(w, sigma[d])
                known = [assign.get(x) for x in src]
                if known[0] is None and known[1] is None:
                    continue
                for x, y in zip(src, known):
                    if y is not None and y not in dst:
                        return None
                for k in (0, 1):
                    if known[k] is None:
                        other = dst[1] if known[1 - k] == dst[0] else dst[0]
                        x = src[k]
                        if other in rev:
                            return None
                        assign[x] = other
                        rev[other] = x
                        queue.append(x)
            t, tw = twin(v), twin(w)
            if t in assign:
                if assign[t] != tw:
                    return None
            else:
                if tw in rev:
                    return None
                assign[t] = tw
                rev[tw] = t
                queue.append(t)
        return assign

    def solve(assign: Dict[Vertex, Vertex]):
        nonlocal expansions
        expansions += 1
        if expansions > budget:
            raise InternalError(f"dimension exchange search for n={n}, j={j} exhausted its budget")
        if len(assign) == 4 ** n:
            return assign
        # branch on the first unassigned neighbour pair of an assigned vertex
        for v in sorted(assign):
            w = assign[v]
            for d in range(n):
                src = dim_neighbors(v, d)
                if assign.get(src[0]) is None:
                    dst = dim_neighbors(w, sigma[d])
                    for img in (dst, dst[::-1]):
                        trial = dict(assign)
                        if any(y in trial.values() for y in img):
                            continue
                        trial[src[0]], trial[src[1]] = img
                        res = propagate(trial, [src[0], src[1]])
                        if res is not None:
                            got = solve(res)
                            if got is not None:
                                return got
                    return None
        return None

    start = propagate({origin: origin}, [origin])
    found = solve(start) if start is not None else None
    if found is None:
        raise InternalError(f"no dimension-swapping automorphism found for n={n}, j={j}")
    return found


# --------------------------------------------------------------------------
# splitting into four subcubes


@dataclass(frozen=True)
class SubcubeSplit:
    """BH_n cut into B^0..B^3 by deleting the edges of one dimension.

    When ``normalizer`` is present the split lives in the image frame: vertex
    ``v`` of the original graph sits in block ``part_of(normalizer(v))``.
    """

    n: int
    dimension: int
    axis: int  # coordinate that indexes the blocks in the (normalized) frame
    blocks: Tuple[Subcube, Subcube, Subcube, Subcube]
    normalizer: Optional[Automorphism] = None

    def _frame(self, v: Vertex) -> Vertex:
        return self.normalizer(v) if self.normalizer is not None else v

    def _unframe(self, v: Vertex) -> Vertex:
        return self.normalizer.inv(v) if self.normalizer is not None else v

    def part_of(self, v: Vertex) -> int:
        return self._frame(v)[self.axis]

    def part(self, i: int) -> Tuple[Vertex, ...]:
        return tuple(sorted(self._unframe(v) for v in self.blocks[i].vertices()))

    def down(self, i: int, v: Vertex) -> Vertex:
        return self.blocks[i].down(self._frame(v))

    def up(self, i: int, w: Vertex) -> Vertex:
        return self._unframe(self.blocks[i].up(w))

    def cross(self, i: int) -> Tuple[Edge, ...]:
        """E_{i,i+1} as (even endpoint in B^i, odd endpoint in B^{i+1}), sorted."""
        out = []
        nxt = (i + 1) % 4
        for v in self.blocks[i].vertices():
            if v[0] % 2 == 0:
                for w in dim_neighbors(v, self.axis):
                    if w[self.axis] == nxt:
                        out.append((self._unframe(v), self._unframe(w)))
        return tuple(sorted(out))


def split(n: int, k: int) -> SubcubeSplit:
    if n < 2:
        raise InputError("split needs n >= 2")
    if not 0 <= k < n:
        raise InputError(f"dimension {k} out of range for n={n}")
    if k == 0:
        axis, norm = n - 1, dimension_exchange(n, n - 1)
    else:
        axis, norm = k, None
    base = Subcube(n)
    blocks = tuple(base.restrict(axis, i) for i in range(4))
    return SubcubeSplit(n, k, axis, blocks, norm)


def axis_frame(n: int, k: int) -> Automorphism:
    """An automorphism carrying dimension k onto dimension n - 1 whose image
    labels blocks by the last coordinate exactly as ``split(n, k)`` does."""
    if not 0 <= k < n:
        raise InputError(f"dimension {k} out of range for n={n}")
    if k == n - 1:
        return identity(n)
    if k == 0:
        return dimension_exchange(n, n - 1)
    return outer_swap(n, k, n - 1)
