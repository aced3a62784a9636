import random

import pytest

from bhdpc.errors import BudgetExceeded, InputError, NotFound
from bhdpc.hampath import (HamQuery, default_budget, find_path, ham_path, longest_path_excluding,
                           reference_path, subcube_path)
from bhdpc.instance import path_violations
from bhdpc.topology import FaultSet, Subcube, edges, incident_edges, side, vertices


def _opposite_pair(rng, n):
    evens = [v for v in vertices(n) if side(v) == 0]
    odds = [v for v in vertices(n) if side(v) == 1]
    return rng.choice(evens), rng.choice(odds)


@pytest.mark.parametrize("seed", range(20))
def test_ham_path_bh3_with_faults(seed):
    rng = random.Random(seed)
    f = FaultSet(3, rng.sample(edges(3), 4))
    x, y = _opposite_pair(rng, 3)
    p = ham_path(HamQuery(3, f, x, y))
    assert len(p) == 64 and (p[0], p[-1]) == (x, y)
    assert path_violations(p, f) == []


def test_longest_path_excluding_skips_vertices():
    f = FaultSet(2)
    x, y, drop = (0, 0), (1, 0), [(0, 1), (1, 1)]
    p = longest_path_excluding(HamQuery(2, f, x, y, frozenset(drop)))
    assert set(p) == set(vertices(2)) - set(drop)
    assert path_violations(p, f) == []


def test_parity_precheck_raises_not_found():
    with pytest.raises(NotFound):
        ham_path(HamQuery(2, FaultSet(2), (0, 0), (2, 0)))


def test_isolated_vertex_has_no_path():
    f = FaultSet(2, incident_edges((1, 1))[:3])
    assert reference_path(HamQuery(2, f, (0, 0), (1, 0))) is None


def test_budget_exhaustion_is_reported():
    f = FaultSet(3, incident_edges((1, 1, 1))[:5])
    with pytest.raises((BudgetExceeded, NotFound)):
        ham_path(HamQuery(3, f, (0, 0, 0), (1, 0, 0), budget=10))


def test_query_validation():
    with pytest.raises(InputError):
        ham_path(HamQuery(2, FaultSet(2), (0, 0), (0, 0)))
    with pytest.raises(InputError):
        ham_path(HamQuery(2, FaultSet(3), (0, 0), (1, 0)))
    with pytest.raises(InputError):
        ham_path(HamQuery(2, FaultSet(2), (0, 0), (1, 0), frozenset([(1, 1)])))


def test_budget_env_override(monkeypatch):
    monkeypatch.setenv("BHDPC_BUDGET", "1234")
    assert default_budget() == 1234
    monkeypatch.setenv("BHDPC_BUDGET", "many")
    with pytest.raises(InputError):
        default_budget()


def test_find_path_reference_agree():
    rng = random.Random(4)
    for _ in range(100):
        f = FaultSet(2, rng.sample(edges(2), 2))
        x, y = _opposite_pair(rng, 2)
        ref = reference_path(HamQuery(2, f, x, y))
        try:
            got = find_path(2, f, x, y)
        except NotFound:
            got = None
        assert (ref is None) == (got is None)


@pytest.mark.parametrize("dim_fixed", [((1, 2),), ((2, 1),), ((1, 0), (2, 3))])
def test_subcube_path_in_global_coordinates(dim_fixed):
    sc = Subcube(3, dim_fixed)
    vs = sc.vertices()
    x = next(v for v in vs if side(v) == 0)
    y = next(v for v in vs if side(v) == 1)
    p = subcube_path(sc, FaultSet(3), x, y)
    assert p is not None and set(p) == set(vs) and (p[0], p[-1]) == (x, y)
    assert path_violations(p) == []


def test_subcube_path_large_block_uses_cover():
    rng = random.Random(2)
    sc = Subcube(5).restrict(4, 1)
    f = FaultSet(5, [e for e in rng.sample(edges(5), 40) if e[0] in sc and e[1] in sc][:5])
    vs = sc.vertices()
    x = next(v for v in vs if side(v) == 0)
    y = [v for v in vs if side(v) == 1][-1]
    p = subcube_path(sc, f, x, y)
    assert p is not None and len(p) == 256 and set(p) == set(vs)
    assert path_violations(p, f) == []


def test_bh1_path_walks_the_cycle():
    p = ham_path(HamQuery(1, FaultSet(1), (0,), (1,)))
    assert p == ((0,), (3,), (2,), (1,))


def test_bh2_path_with_two_faults():
    f = FaultSet(2, [((0, 0), (1, 0)), ((2, 2), (3, 2))])
    p = ham_path(HamQuery(2, f, (0, 0), (1, 0)))
    assert len(p) == 16 and path_violations(p, f) == []
