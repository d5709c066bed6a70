import pytest

from tfsmt.formats import parse_machine, print_machine
from tfsmt.generator import random_fault_model
from tfsmt.machine import INF, validate


@pytest.mark.parametrize("states", [4, 6, 8])
def test_degree_four_fault_domain(states):
    for seed in range(3):
        m = random_fault_model(states, 2, 2, 3, 5, 4, seed)
        assert 10**4 <= m.count_mutants() < 10**5
        assert not validate(m)


    m = random_fault_model(5, 2, 2, 3, 5, 0, seed=4)
    assert m.count_mutants() == 0
    assert not m.mutated_ids


def test_same_seed_same_machine():
    a = print_machine(random_fault_model(6, 2, 3, 3, 5, 3.5, seed=9))
    b = print_machine(random_fault_model(6, 2, 3, 3, 5, 3.5, seed=9))
    c = print_machine(random_fault_model(6, 2, 3, 3, 5, 3.5, seed=10))
    assert a == b != c
    assert a.startswith("tfsm rand_6s_2i_3o_d3.5_seed9\n")


def test_bounds_respected():
    for seed in range(20):
        m = random_fault_model(4, 3, 2, 2, 4, 3, seed)
        assert not validate(m)
        for t in m.transitions:
            if t.kind == "to" and t.timeout != INF:
                assert t.timeout <= (4 if t.mutated else 2)
            if t.kind == "to" and t.timeout == INF:
                assert t.dst == t.src
        assert parse_machine(print_machine(m)).count_mutants() == m.count_mutants()


def test_saturation_stops():
    m = random_fault_model(1, 1, 1, 1, 1, 9, seed=0)
    # one state, one input, one output: one io and two timeouts are all there is
    assert len(m.transitions) == 3
    assert m.count_mutants() == 1


def test_rejects_bad_sizes():
    with pytest.raises(ValueError):
        random_fault_model(0, 2, 2, 3, 5, 2, seed=0)
