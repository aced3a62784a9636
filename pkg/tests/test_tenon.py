import pytest

from bhdpc.errors import InputError
from bhdpc.tenon import RING, all_chains, ring_position, tenon_chain, tenon_dpc, tenon_ham_path
from bhdpc.topology import common_neighbors, edges, twin, vertices


def test_ring_lists_every_vertex_once():
    assert sorted(v for pair in RING for v in pair) == sorted(vertices(2))
    for p in range(8):
        a, b = RING[p], RING[(p + 1) % 8]
        # consecutive pairs induce a 4-cycle
        assert all(y in common_neighbors(a[0], a[1]) for y in b)
        assert a[1] == twin(a[0])


def test_ring_order():
    assert RING[0] == ((1, 0), (3, 0))
    assert RING[1] == ((0, 3), (2, 3))
    assert ring_position((2, 0)) == 7


def test_single_chain_shape():
    ch = tenon_chain((1, 0), (0, 1))  # ring positions 0 and 5
    assert ch.m == 3 and not ch.double
    assert len(ch.pairs) == ch.m + 1 and len(ch.cells()) == ch.m
    assert len(ch.vertices()) == 2 * (ch.m + 1) + 2


def test_double_chain_shape():
    ch = tenon_chain((1, 0), (0, 2), (3, 0), (2, 2))  # ring positions 0 and 3
    assert ch.double and ch.m == 1
    assert len(ch.pairs) == ch.m + 3 and len(ch.cells()) == ch.m + 2
    assert ch.attachments() == []


def test_chain_rejections():
    with pytest.raises(InputError):
        tenon_chain((1, 0), (0, 3))  # neighbouring pairs leave no cell
    with pytest.raises(InputError):
        tenon_chain((1, 0), (0, 1), (1, 0), (2, 1))  # x is not the twin of u
    ch = tenon_chain((1, 0), (0, 1))
    outside = next(e for e in edges(2) if e not in ch.edges())
    with pytest.raises(InputError):
        tenon_ham_path(ch, outside)


def test_ham_path_avoids_fault():
    for ch in all_chains((1, 3, 5)):
        f = ch.cells()[0][0]
        p = tenon_ham_path(ch, f)
        assert set(p) == set(ch.vertices())
        assert all({a, b} != set(f) for a, b in zip(p, p[1:]))


def test_dpc_paths_have_equal_length():
    for ch in all_chains((1, 3), double=True):
        cells = ch.cells()
        p, q = tenon_dpc(ch, cells[0][0], cells[-1][1])
        assert len(p) == len(q) == len(ch.pairs)
        assert (p[0], p[-1], q[0], q[-1]) == (ch.u, ch.v, ch.x, ch.y)


def test_dpc_rejects_faults_in_one_cell():
    ch = next(iter(all_chains((3,), double=True)))
    c = ch.cells()[1]
    with pytest.raises(InputError):
        tenon_dpc(ch, c[0], c[1])
