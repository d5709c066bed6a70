import pytest

from tfsmt.distinguishing import Comb, revealing_combs
from tfsmt.encoding import (
    CnfFormula,
    VarMap,
    as_model,
    decode,
    encode_exactly_one,
    encode_exclude,
    encode_not_phi_alpha,
    encode_phi_m,
)
from tfsmt.errors import EmptySuspiciousSet, NoUntrustedTransitions
from tfsmt.kernels import count_models
from tfsmt.machine import INF, MutationMachine, Transition
from tfsmt.oracle import enumerate_mutants
from tfsmt.sat import enumerate_models, solve

NOT_PHI_ALPHA = [
    ["t3", "t17", "t8", "t10"],
    ["t3", "t17", "t8", "t13"],
    ["t3", "t17", "t15", "t14"],
    ["t16", "t17", "t8", "t10"],
    ["t16", "t17", "t8", "t13"],
    ["t16", "t17", "t15", "t14"],
]


@pytest.fixture(scope="module")
def vm(M1):
    return VarMap(M1)


def named(f, vm):
    return {frozenset(("~" if x < 0 else "") + vm.tid[abs(x)] for x in c) for c in f.clauses}


def test_varmap(vm):
    assert len(vm) == 10
    assert "t1" not in vm and "t3" in vm
    assert sorted(vm.var.values()) == list(range(1, 11))


def test_not_phi_alpha_matches_clause_set(da_m1, alpha, vm):
    f = encode_not_phi_alpha(revealing_combs(da_m1, alpha), vm)
    assert named(f, vm) == {frozenset("~" + t for t in c) for c in NOT_PHI_ALPHA}
    assert len(f) == 6


def test_not_phi_alpha_edge_cases(vm):
    assert len(encode_not_phi_alpha(set(), vm)) == 0
    dup = Comb(("t3", "t12", "t10", "t3", "t12", "t10"), frozenset({"t3", "t10"}))
    (clause,) = encode_not_phi_alpha({dup}, vm).clauses
    assert len(clause) == 2
    with pytest.raises(EmptySuspiciousSet):
        encode_not_phi_alpha({Comb(("t1",), frozenset())}, vm)


def test_exactly_one(vm):
    f = encode_exactly_one(["t3", "t16"], vm)
    assert named(f, vm) == {frozenset({"~t3", "~t16"}), frozenset({"t3", "t16"})}
    assert len(encode_exactly_one(["t1"], vm)) == 0


def test_exactly_one_three_members():
    rows = [Transition(f"u{k}", "io", 0, 0, inp=0, out=0, mutated=k > 0) for k in range(3)]
    rows[1] = Transition("u1", "io", 0, 0, inp=0, out=1, mutated=True)
    rows[2] = Transition("u2", "io", 0, 0, inp=0, out=2, mutated=True)
    rows.append(Transition("u3", "to", 0, 0, timeout=INF))
    m = MutationMachine("G", ["p"], "p", ["a"], ["x", "y", "z"], rows)
    f = encode_exactly_one(["u0", "u1", "u2"], VarMap(m))
    assert len(f) == 4
    assert sum(len(c) == 2 for c in f.clauses) == 3


def test_phi_m1(M1, vm):
    f = encode_phi_m(M1, vm)
    groups = {frozenset({"~t7", "~t14"}), frozenset({"t7", "t14"}),
              frozenset({"~t8", "~t15"}), frozenset({"t8", "t15"}),
              frozenset({"~t10", "~t13"}), frozenset({"t10", "t13"}),
              frozenset({"~t3", "~t16"}), frozenset({"t3", "t16"}),
              frozenset({"~t9", "~t17"}), frozenset({"t9", "t17"})}
    reject = frozenset({"~t7", "~t8", "~t10", "~t3", "~t9"})
    assert named(f, vm) == groups | {reject}
    assert count_models(f, len(vm)) == 31
    assert sum(1 for _ in enumerate_models(f, len(vm))) == 31


def test_phi_m_empty_domain():
    m = MutationMachine(
        "D", ["p"], "p", ["a"], ["x"],
        [Transition("u1", "io", 0, 0, inp=0, out=0), Transition("u2", "to", 0, 0, timeout=INF)],
    )
    with pytest.raises(NoUntrustedTransitions):
        encode_phi_m(m, VarMap(m))


def test_solutions_are_mutants(M1, vm):
    """Every model of the fault-domain formula decodes to a mutant, and all mutants appear."""
    f = encode_phi_m(M1, vm)
    decoded = [decode(m, M1, vm) for m in enumerate_models(f, len(vm))]
    assert all(P.is_mutant() for P in decoded)
    assert sorted(map(repr, decoded)) == sorted(map(repr, enumerate_mutants(M1)))


def test_exclude(M1, P1, vm):
    f = encode_exclude(P1, vm)
    assert named(f, vm) == {frozenset({"~t16", "~t13", "~t9", "~t7", "~t8"})}
    g = encode_phi_m(M1, vm)
    for P in enumerate_mutants(M1):
        g = g & encode_exclude(P, vm)
    assert not solve(g, len(vm))
    two = encode_phi_m(M1, vm) & encode_exclude(P1, vm) & encode_exclude(M1.mutant("t17"), vm)
    assert count_models(two, len(vm)) == 29


def test_decode_round_trip(M1, vm):
    for P in enumerate_mutants(M1):
        assert decode(as_model(P, vm), M1, vm) == P


def test_decode_known_survivor(M1, vm, da_m1, alpha):
    ids = ["t1", "t2", "t4", "t6", "t5", "t7", "t9", "t15", "t13", "t12", "t11", "t16"]
    model = {v: vm.tid[v] in ids for v in vm.tid}
    P = decode(model, M1, vm)
    assert {t.id for t in P.transitions} == set(ids)
    assert P.is_mutant()
    assert encode_not_phi_alpha(revealing_combs(da_m1, alpha), vm).evaluate(model)
    # all untrusted on, all mutated off is the reference machine: rejected by the fault-domain formula
    spec_model = {v: vm.tid[v] in M1.spec_ids for v in vm.tid}
    assert not encode_phi_m(M1, vm).evaluate(spec_model)


def test_cnf_formula_basics():
    f = CnfFormula([(1, -2), (2, 2, 3)])
    assert f.clauses == [(1, -2), (2, 3)]
    assert f.num_vars == 3
    with pytest.raises(ValueError):
        f.add((1, -1))
    g = CnfFormula.from_dimacs(f.to_dimacs())
    assert g.clauses == f.clauses and g.num_vars == 3
    assert f.evaluate({1: True, 2: False, 3: True})
    assert not f.evaluate({1: False, 2: True, 3: True})
    assert CnfFormula.from_dimacs("c x\np cnf 5 1\n1 -2\n 3 0\n").clauses == [(1, -2, 3)]


def test_dimacs_comment_map(M1, vm):
    text = encode_phi_m(M1, vm).to_dimacs(vm)
    assert "c 1 t3" in text
    assert "p cnf 10 11" in text


def test_array_cache_follows_conjunction(M1, vm):
    import numpy as np

    from tfsmt.kernels import cnf_arrays

    f = encode_phi_m(M1, vm)
    f.arrays()
    g = f & encode_exclude(M1.mutant("t16"), vm)
    g.add((1, 2))
    got = g.arrays()
    want = cnf_arrays(g.clauses)
    for a, b in zip(got, want):
        assert np.array_equal(a, b)
