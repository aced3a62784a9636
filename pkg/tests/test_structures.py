import random
from dataclasses import replace

import pytest

from bhdpc.errors import InputError, InternalError
from bhdpc.oracle import cycle_structure_exists, twin_path_structure_exists
from bhdpc.structures import (check_structure, find_cycle_structure, find_twin_path_structure,
                              relay)
from bhdpc.topology import FaultSet, Subcube, edges, side, split


def _random_faults(rng, n, count):
    return FaultSet(n, rng.sample(edges(n), count))


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("i", [0, 2])
def test_cycle_structure_fault_free(k, i):
    f = FaultSet(3)
    s = find_cycle_structure(3, f, k, i)
    assert check_structure(s, f) == []
    assert s.k == k and s.i == i
    assert set(s.P) | {s.b, s.c, s.d} == set(split(3, k).part(i))


@pytest.mark.parametrize("k", [0, 2])
def test_twin_path_structure_fault_free(k):
    f = FaultSet(3)
    odd = [v for v in split(3, k).part(1) if side(v) == 1]
    s = find_twin_path_structure(3, f, k, 1, odd[0], odd[-1])
    assert check_structure(s, f) == []
    assert s.Q[:3] == (s.c, s.b, s.a)


@pytest.mark.parametrize("seed", range(15))
def test_structures_bh4(seed):
    rng = random.Random(seed)
    f = _random_faults(rng, 4, 5)
    k, i = rng.randrange(4), rng.randrange(4)
    s = find_cycle_structure(4, f, k, i)
    assert check_structure(s, f) == []
    odd = [v for v in split(4, k).part(i) if side(v) == 1]
    t1, t2 = rng.sample(odd, 2)
    s = find_twin_path_structure(4, f, k, i, t1, t2)
    assert check_structure(s, f) == []


def test_checker_catches_tampering():
    f = FaultSet(3)
    s = find_cycle_structure(3, f, 2, 0)
    assert check_structure(replace(s, P=s.P[:-1]), f)
    assert check_structure(replace(s, u=s.a), f)
    broken = FaultSet(3, [(min(s.P[0], s.P[1]), max(s.P[0], s.P[1]))])
    assert any("faulty" in x for x in check_structure(s, broken))


def test_checker_flags_terminal_collision():
    f = FaultSet(3)
    odd = [v for v in split(3, 1).part(0) if side(v) == 1]
    s = find_twin_path_structure(3, f, 1, 0, odd[0], odd[1])
    assert "b collides with terminal" in check_structure(s, f, context=(s.b, odd[1]))


@pytest.mark.parametrize("seed", range(40))
def test_finder_matches_exhaustive_scan(seed):
    rng = random.Random(100 + seed)
    f = _random_faults(rng, 3, 3)
    k, i = rng.randrange(3), rng.randrange(4)
    try:
        find_cycle_structure(3, f, k, i)
        found = True
    except InternalError:
        found = False
    assert found == cycle_structure_exists(3, f, k, i)


def test_argument_validation():
    with pytest.raises(InputError):
        find_cycle_structure(2, FaultSet(2), 0, 0)
    with pytest.raises(InputError):
        find_cycle_structure(3, FaultSet(3), 3, 0)
    odd = [v for v in split(3, 2).part(0) if side(v) == 1]
    with pytest.raises(InputError):
        find_twin_path_structure(3, FaultSet(3), 2, 1, odd[0], odd[1])  # not in block 1
    with pytest.raises(InputError):
        twin_path_structure_exists(4, FaultSet(4), 0, 0, (1, 0, 0, 0), (3, 0, 0, 0))


def test_relay_threads_blocks():
    n = 3
    # an odd exit steps to block a1 - 1, so an even start walks downwards
    blocks = [Subcube(n).restrict(2, 0).restrict(1, j) for j in (0, 3, 2)]
    start = blocks[0].vertices()[0]
    end = next(v for v in blocks[2].vertices() if side(v) != side(start))
    p = relay(FaultSet(n), blocks, 1, start, end)
    assert p is not None and p[0] == start and p[-1] == end
    assert set(p) == {v for b in blocks for v in b.vertices()}
