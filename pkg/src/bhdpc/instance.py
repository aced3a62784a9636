"""Instance-level value types: terminals, paths, covers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import FaultBudgetExceeded, InputError
from .topology import FaultSet, Vertex, is_adjacent, side, validate_vertex, vertices

Path = Tuple[Vertex, ...]


@dataclass(frozen=True)
class Terminals:
    s1: Vertex
    s2: Vertex
    t1: Vertex
    t2: Vertex

    @classmethod
    def make(cls, s1, s2, t1, t2, n: Optional[int] = None) -> "Terminals":
        s1, s2, t1, t2 = (validate_vertex(x, n) for x in (s1, s2, t1, t2))
        term = cls(s1, s2, t1, t2)
        term.check()
        return term

    def check(self) -> None:
        if len({len(x) for x in self.all()}) != 1:
            raise InputError("terminals have different dimensions")
        if self.s1 == self.s2 or self.t1 == self.t2:
            raise InputError("terminals must be pairwise distinct within S and T")
        if side(self.s1) != side(self.s2) or side(self.t1) != side(self.t2):
            raise InputError("S and T must each lie in one partite set")
        if side(self.s1) == side(self.t1):
            raise InputError("S and T must lie in different partite sets")

    def all(self) -> Tuple[Vertex, Vertex, Vertex, Vertex]:
        return (self.s1, self.s2, self.t1, self.t2)

    def mapped(self, fn) -> "Terminals":
        return Terminals(fn(self.s1), fn(self.s2), fn(self.t1), fn(self.t2))


@dataclass(frozen=True)
class Dpc2:
    """A paired 2-disjoint path cover: p1 runs s1 -> t1, p2 runs s2 -> t2."""

    p1: Path
    p2: Path

    def mapped(self, fn) -> "Dpc2":
        return Dpc2(tuple(fn(v) for v in self.p1), tuple(fn(v) for v in self.p2))


@dataclass(frozen=True)
class Infeasible:
    witness: Optional[Vertex]


@dataclass(frozen=True)
class Instance:
    n: int
    faults: FaultSet
    terminals: Terminals

    @classmethod
    def make(cls, n: int, faults, s1, s2, t1, t2) -> "Instance":
        if not isinstance(faults, FaultSet):
            faults = FaultSet(n, faults)
        return cls(n, faults, Terminals.make(s1, s2, t1, t2, n))

    def check_budget(self) -> None:
        limit = 2 * self.n - 3
        if len(self.faults) > limit:
            raise FaultBudgetExceeded(
                f"{len(self.faults)} faulty edges exceed the tolerated 2n-3 = {limit}")


def path_violations(path: Sequence[Vertex], faults: Optional[FaultSet] = None) -> list:
    out = []
    if not path:
        return ["empty path"]
    if len(set(path)) != len(path):
        out.append("path repeats a vertex")
    for a, b in zip(path, path[1:]):
        if not is_adjacent(a, b):
            out.append(f"{a}-{b} is not an edge")
        elif faults is not None and faults.is_faulty(a, b):
            out.append(f"faulty edge used: {a}-{b}")
    return out


def all_terminal_configs(n: int):
    """Every (s1, s2, t1, t2) with S on side 0, s1 < s2, and (t1, t2) ordered."""
    evens = [v for v in vertices(n) if v[0] % 2 == 0]
    odds = [v for v in vertices(n) if v[0] % 2 == 1]
    for i, s1 in enumerate(evens):
        for s2 in evens[i + 1:]:
            for t1 in odds:
                for t2 in odds:
                    if t1 != t2:
                        yield Terminals(s1, s2, t1, t2)
