import pytest

from tfsmt.engine import (
    EPSILON,
    EngineStats,
    FaultModel,
    check_suite,
    generate_complete_suite,
    verify_completeness,
)
from tfsmt.encoding import CnfFormula
from tfsmt.generator import random_fault_model
from tfsmt.models import load_bundled
from tfsmt.oracle import classify_mutants, oracle_check_suite
from tfsmt.sat import CdclSolver
from tfsmt.timed import TimedSequence, detects

from conftest import E_INIT, FIVE_TESTS


def test_epsilon_marker():
    assert not EPSILON
    assert repr(EPSILON) == "ε"
    import pickle

    assert pickle.loads(pickle.dumps(EPSILON)) is EPSILON


def test_fault_model_rejects_foreign_spec(M1, P1):
    with pytest.raises(ValueError):
        FaultModel(M1, spec=P1)


def test_verify_initial_test_is_incomplete(fm1, S1):
    stats = EngineStats()
    fd, test = verify_completeness(fm1.phi_m(), [E_INIT], fm1.da, fm1.varmap, stats=stats)
    assert test == TimedSequence.parse("a@3")
    P, logged = stats.log[-1]
    assert logged == test and detects(S1, P, test)
    assert not detects(S1, P, TimedSequence.parse(E_INIT))
    assert stats.revealing_combs == 6
    assert len(fd) == len(fm1.phi_m()) + 6


def test_verify_complete_suite(fm1):
    assert check_suite(fm1, FIVE_TESTS) is EPSILON
    assert check_suite(fm1, FIVE_TESTS[:4]) is not EPSILON


def test_generation_on_m1(fm1, M1):
    res = generate_complete_suite([E_INIT], fm1)
    assert [str(t) for t in res] == [E_INIT, "a@3", "b@0 a@0 a@0", "b@0 a@0 b@0 a@0", "a@4 a@8"]
    assert sorted(map(str, res)) == sorted(FIVE_TESTS)
    assert not res.trivially_complete
    assert res.stats.tests_added == 4
    assert check_suite(fm1, res.suite) is EPSILON
    assert oracle_check_suite(M1, res.suite)


def test_generation_without_initial_tests(fm1, M1):
    res = generate_complete_suite([], fm1, solver=CdclSolver(jit=False))
    assert oracle_check_suite(M1, res.suite)
    assert check_suite(fm1, res.suite) is EPSILON


def test_each_new_test_kills_a_survivor(fm1, S1):
    """Every generated test detects a nonconforming mutant no earlier test detected."""
    res = generate_complete_suite([E_INIT], fm1)
    earlier = [TimedSequence.parse(E_INIT)]
    for P, test in res.stats.log:
        assert detects(S1, P, test)
        assert not any(detects(S1, P, t) for t in earlier)
        earlier.append(test)


def test_trivially_complete_domain():
    m = random_fault_model(4, 2, 2, 3, 5, 0, seed=3)
    fm = FaultModel(m)
    res = generate_complete_suite(["i0@1"], fm)
    assert res.trivially_complete
    assert [str(t) for t in res] == ["i0@1"]
    assert check_suite(fm, []) is EPSILON


def test_drop_prefixes(fm1):
    res = generate_complete_suite(["b@0 a@0", "b@0 a@0 b@0"], fm1, drop_prefixes=True)
    tests = list(res)
    assert not any(len(a) < len(b) and a.is_prefix_of(b) for a in tests for b in tests)
    assert check_suite(fm1, tests) is EPSILON


def test_conforming_mutants_are_excluded():
    m = random_fault_model(3, 2, 2, 2, 4, 2.5, seed=22)
    mutants, mask = classify_mutants(m)
    assert mask.sum() == 2
    fm = FaultModel(m)
    res = generate_complete_suite([], fm)
    assert oracle_check_suite(m, res.suite)
    # once every nonconforming mutant is killed, only conforming ones can come back
    fd, out = verify_completeness(fm.phi_m(), list(res.suite), fm.da, fm.varmap)
    assert out is EPSILON


def test_accumulated_formula_is_reused(fm1):
    fd, first = verify_completeness(fm1.phi_m(), [E_INIT], fm1.da, fm1.varmap)
    fd2, second = verify_completeness(fd, [first], fm1.da, fm1.varmap)
    assert second not in (first, EPSILON)
    assert isinstance(fd2, CnfFormula) and len(fd2) > len(fd)


@pytest.mark.parametrize("seed", range(5))
def test_random_models_agree_with_oracle(seed):
    m = random_fault_model(4, 2, 2, 3, 5, 3, seed)
    res = generate_complete_suite([], FaultModel(m))
    assert oracle_check_suite(m, res.suite)


@pytest.mark.slow
def test_tftp_generation():
    m = load_bundled("tftp")
    fm = FaultModel(m)
    res = generate_complete_suite([], fm)
    assert max(len(t) for t in res) <= 6
    assert check_suite(fm, res.suite) is EPSILON
