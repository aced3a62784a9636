import pytest

from bhdpc.errors import FaultBudgetExceeded, InputError
from bhdpc.instance import Dpc2, Instance, Terminals, all_terminal_configs, path_violations
from bhdpc.topology import FaultSet, edges


def test_terminal_validation():
    Terminals.make((0, 0), (2, 1), (1, 1), (3, 2), n=2)
    for bad in [((0, 0), (0, 0), (1, 1), (3, 2)), ((0, 0), (1, 1), (1, 0), (3, 2)),
                ((0, 0), (2, 1), (0, 1), (2, 2)), ((0, 0), (2, 1), (1, 1), (3,))]:
        with pytest.raises(InputError):
            Terminals.make(*bad)


def test_bh2_configuration_count():
    configs = list(all_terminal_configs(2))
    assert len(configs) == 28 * 56 == len(set(configs))


def test_fault_budget():
    inst = Instance.make(2, list(edges(2))[:2], (0, 0), (2, 1), (1, 1), (3, 2))
    with pytest.raises(FaultBudgetExceeded):
        inst.check_budget()
    Instance.make(2, list(edges(2))[:1], (0, 0), (2, 1), (1, 1), (3, 2)).check_budget()


def test_path_violations():
    f = FaultSet(2, [((0, 0), (1, 0))])
    assert path_violations(((0, 0), (1, 1), (2, 0))) == []
    assert path_violations(((0, 0), (2, 0)))
    assert path_violations(((0, 0), (1, 0)), f) == ["faulty edge used: (0, 0)-(1, 0)"]
    assert path_violations(((0, 0), (1, 1), (0, 0)))
    assert path_violations(()) == ["empty path"]


def test_cover_mapping():
    c = Dpc2(((0, 0), (1, 1)), ((2, 0), (3, 0)))
    m = c.mapped(lambda v: (v[0], (v[1] + 1) % 4))
    assert m.p1 == ((0, 1), (1, 2)) and m.p2 == ((2, 1), (3, 1))
