import itertools
import random

import pytest

from bhdpc.basecase import (FULL, exception_witness, iter_pair_structures, mask_of,
                            pair_structure_one_fault, pair_structure_two_faults,
                            pair_structure_violations, solve_bh2, table)
from bhdpc.errors import InputError, InternalError
from bhdpc.instance import Dpc2, Infeasible, Instance, Terminals, all_terminal_configs, path_violations
from bhdpc.oracle import NotExists, brute_force_dpc, verify_dpc
from bhdpc.topology import (FaultSet, canon_edge, edges, edges_of_dim, incident_edges, side,
                            vertices)


def test_table_paths_span_the_allowed_set():
    f = FaultSet(2, [((0, 0), (1, 0))])
    tab = table(f)
    rng = random.Random(0)
    for _ in range(200):
        x, y = rng.sample(vertices(2), 2)
        drop = rng.sample([v for v in vertices(2) if v not in (x, y)], rng.randint(0, 3))
        allowed = FULL & ~mask_of(drop)
        p = tab.path(x, y, allowed)
        assert (p is not None) == tab.has_path(x, y, allowed)
        if p is not None:
            assert not path_violations(p, f)
            assert (p[0], p[-1]) == (x, y)
            assert set(p) == set(vertices(2)) - set(drop)


def test_two_paths_matches_oracle_on_sample():
    rng = random.Random(1)
    configs = list(all_terminal_configs(2))
    for _ in range(300):
        f = FaultSet(2, rng.sample(edges(2), rng.randint(0, 3)))
        t = rng.choice(configs)
        got = table(f).two_paths(t.s1, t.t1, t.s2, t.t2)
        oracle = brute_force_dpc(Instance(2, f, t))
        assert (got is None) == isinstance(oracle, NotExists)
        if got is not None:
            assert not verify_dpc(Instance(2, f, t), Dpc2(*got))


def test_feasibility_vector_agrees_with_two_paths():
    f = FaultSet(2, [edges_of_dim(2, 0)[3], edges_of_dim(2, 1)[5]])
    configs = list(all_terminal_configs(2))[:400]
    vec = table(f).feasibility(configs)
    for t, m in zip(configs, vec):
        assert (m >= 0) == (table(f).two_paths(t.s1, t.t1, t.s2, t.t2) is not None)


def _blocked_at(x, keep_a, keep_b):
    live = {canon_edge(keep_a, x), canon_edge(keep_b, x)}
    return FaultSet(2, [e for e in incident_edges(x) if e not in live])


def test_exception_instance():
    # x = (1, 0) keeps only its edges to s1 = (0, 0) and s2 = (2, 0)
    x = (1, 0)
    f = _blocked_at(x, (0, 0), (2, 0))
    assert len(f) == 2
    t = Terminals((0, 0), (2, 0), (1, 1), (3, 2))
    assert exception_witness(f, t) == x
    got = solve_bh2(f, t)
    assert isinstance(got, Infeasible) and got.witness == x


def test_exception_witness_ignores_terminals():
    x = (1, 0)
    f = _blocked_at(x, (0, 0), (2, 0))
    assert exception_witness(f, Terminals((0, 0), (2, 0), x, (3, 2))) is None


def test_solve_bh2_returns_verified_cover():
    f = FaultSet(2, [((0, 0), (1, 0))])
    t = Terminals((0, 0), (2, 1), (1, 1), (3, 2))
    got = solve_bh2(f, t)
    assert isinstance(got, Dpc2)
    assert verify_dpc(Instance(2, f, t), got) == []
    with pytest.raises(InputError):
        solve_bh2(FaultSet(3), Terminals((0, 0, 0), (2, 0, 0), (1, 0, 0), (3, 0, 0)))


@pytest.mark.parametrize("seed", range(6))
def test_pair_structures_valid(seed):
    rng = random.Random(seed)
    odds = [v for v in vertices(2) if side(v) == 1]
    t1, t2 = rng.sample(odds, 2)
    e, f = rng.choice(edges_of_dim(2, 0)), rng.choice(edges_of_dim(2, 1))
    faults = FaultSet(2, [e, f])
    try:
        s = pair_structure_two_faults(e, f, t1, t2)
    except InternalError:
        assert next(iter_pair_structures(faults, t1, t2), None) is None
        return
    assert pair_structure_violations(s, faults, t1, t2) == []
    s1 = pair_structure_one_fault(e, t1, t2)
    assert pair_structure_violations(s1, FaultSet(2, [e]), t1, t2) == []


def test_pair_structure_rejects_bad_terminals():
    with pytest.raises(InputError):
        pair_structure_one_fault(None, (0, 0), (1, 0))


def test_every_single_fault_pair_structure_exists():
    odds = [v for v in vertices(2) if side(v) == 1]
    for e in [None] + list(edges(2))[::4]:
        for t1, t2 in itertools.combinations(odds, 2):
            s = pair_structure_one_fault(e, t1, t2)
            assert pair_structure_violations(s, FaultSet(2, [e] if e else []), t1, t2) == []
