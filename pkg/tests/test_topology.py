import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bhdpc.errors import InputError, NotAdjacent
from bhdpc.topology import (FaultSet, Subcube, axis_frame, canon_edge, common_neighbors,
                            dim_neighbors, dimension_exchange, distance, edge_dimension, edges,
                            edges_of_dim, incident_edges, inner_translate_2, is_adjacent,
                            neighbors, outer_swap, outer_translate, reflect, side, split, twin,
                            validate_vertex, vertices)


def vertex(n):
    return st.tuples(*[st.integers(0, 3)] * n)


def test_sizes():
    for n in (1, 2, 3, 4):
        assert len(vertices(n)) == 4 ** n
        assert len(edges(n)) == n * 4 ** n
        assert sum(len(edges_of_dim(n, d)) for d in range(n)) == len(edges(n))


def test_bh1_is_a_four_cycle():
    assert set(neighbors((0,))) == {(1,), (3,)}
    assert set(neighbors((2,))) == {(1,), (3,)}


def test_known_neighbours_in_bh2():
    # even inner index: the outer step keeps the sign; odd flips it
    assert set(dim_neighbors((0, 0), 1)) == {(1, 1), (3, 1)}
    assert set(dim_neighbors((1, 0), 1)) == {(0, 3), (2, 3)}
    assert set(dim_neighbors((0, 0), 0)) == {(1, 0), (3, 0)}


@given(vertex(3))
def test_neighbourhood_symmetric_and_bipartite(v):
    for w in neighbors(v):
        assert v in neighbors(w)
        assert side(w) != side(v)
        assert edge_dimension(v, w) in range(3)


@given(vertex(3))
def test_twin_shares_neighbourhood(v):
    assert twin(twin(v)) == v
    assert set(neighbors(twin(v))) == set(neighbors(v))
    assert len(common_neighbors(v, twin(v))) == 6


@given(vertex(3), vertex(3))
@settings(max_examples=200)
def test_distance_parity(u, v):
    d = distance(u, v)
    assert (d % 2 == 1) == (side(u) != side(v))
    assert (d == 1) == is_adjacent(u, v)


def test_validate_vertex_rejects_bad_input():
    for bad in [(), (4,), (0, -1), (True, 0), (0.0,)]:
        with pytest.raises(InputError):
            validate_vertex(bad)
    with pytest.raises(InputError):
        validate_vertex((0, 0), 3)


def test_faultset_behaviour():
    e = ((0, 0), (1, 0))
    f = FaultSet(2, [((1, 0), (0, 0)), e])
    assert len(f) == 1 and e in f and ((1, 0), (0, 0)) in f
    assert f.is_faulty((1, 0), (0, 0))
    assert f.count(0) == 1 and f.count(1) == 0
    assert f.faulty_at((0, 0)) == 1
    assert f == FaultSet(2, [e]) and hash(f) == hash(FaultSet(2, [e]))
    with pytest.raises(NotAdjacent):
        FaultSet(2, [((0, 0), (2, 0))])


def test_incident_edges():
    v = (0, 1, 2)
    inc = incident_edges(v)
    assert len(inc) == 6 and all(v in e for e in inc)
    assert all(e == canon_edge(*e) for e in inc)


@pytest.mark.parametrize("make", [
    lambda: outer_translate(3, 1, 1), lambda: outer_translate(3, 2, 3), lambda: reflect(3),
    lambda: inner_translate_2(3), lambda: outer_swap(3, 1, 2), lambda: dimension_exchange(3, 1),
    lambda: dimension_exchange(3, 2), lambda: dimension_exchange(2, 1),
    lambda: reflect(2).then(outer_translate(2, 1, 2)), lambda: axis_frame(3, 0),
])
def test_automorphisms_preserve_edges(make):
    a = make()
    assert a.violations() == []
    for v in vertices(a.n):
        assert a.inv(a(v)) == v


def test_dimension_exchange_swaps_dimension_classes():
    a = dimension_exchange(3, 2)
    assert {edge_dimension(a(u), a(v)) for u, v in edges_of_dim(3, 0)} == {2}
    assert {edge_dimension(a(u), a(v)) for u, v in edges_of_dim(3, 2)} == {0}


def test_reflect_swaps_sides_and_mirrors_blocks():
    r = reflect(3)
    for v in vertices(3):
        assert side(r(v)) != side(v)
        assert r(v)[2] == (-v[2]) % 4


@pytest.mark.parametrize("n,k", [(2, 0), (2, 1), (3, 0), (3, 1), (3, 2), (4, 0), (4, 2)])
def test_split_blocks_and_cross_edges(n, k):
    sp = split(n, k)
    parts = [set(sp.part(i)) for i in range(4)]
    assert set().union(*parts) == set(vertices(n))
    assert all(len(p) == 4 ** (n - 1) for p in parts)
    for i in range(4):
        cross = sp.cross(i)
        assert len(cross) == 4 ** (n - 1)
        for ev, od in cross:
            assert side(ev) == 0 and side(od) == 1
            assert sp.part_of(ev) == i and sp.part_of(od) == (i + 1) % 4
            assert edge_dimension(ev, od) == k
    for u, v in edges(n):
        inside = sp.part_of(u) == sp.part_of(v)
        assert inside == (edge_dimension(u, v) != k)


@pytest.mark.parametrize("n,k", [(3, 0), (3, 1), (3, 2), (4, 1)])
def test_axis_frame_matches_split(n, k):
    frame, sp = axis_frame(n, k), split(n, k)
    for v in vertices(n):
        assert frame(v)[n - 1] == sp.part_of(v)


def test_subcube_down_up_round_trip():
    blk = Subcube(3).restrict(2, 1)
    assert blk.dim == 2 and blk.free == (0, 1)
    for v in blk.vertices():
        assert blk.up(blk.down(v)) == v
        assert v in blk
    with pytest.raises(InputError):
        Subcube(3).restrict(0, 1)


def test_split_needs_n_at_least_two():
    with pytest.raises(InputError):
        split(1, 0)
    with pytest.raises(InputError):
        split(3, 3)
