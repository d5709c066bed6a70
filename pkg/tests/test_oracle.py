from fractions import Fraction

import numpy as np
import pytest

from tfsmt.errors import DomainTooLarge
from tfsmt.generator import random_fault_model
from tfsmt.machine import INF, MutationMachine, Transition
from tfsmt.models import chaos_machine
from tfsmt.oracle import classify_mutants, conforms, detection_matrix, enumerate_mutants, oracle_check_suite
from tfsmt.timed import TimedSequence, detects

from conftest import E_INIT, FIVE_TESTS


def test_enumerates_all_mutants(M1):
    mutants = list(enumerate_mutants(M1))
    assert len(mutants) == 31 == M1.count_mutants()
    assert all(P.is_mutant() for P in mutants)
    assert M1.spec not in mutants


def test_deterministic_machine_has_no_mutants():
    m = random_fault_model(4, 2, 2, 3, 5, 0, seed=1)
    assert list(enumerate_mutants(m)) == []
    verdict = oracle_check_suite(m, [])
    assert verdict.complete and verdict.mutants == 0


def test_bound_is_enforced(M1):
    with pytest.raises(DomainTooLarge):
        next(enumerate_mutants(chaos_machine(M1)))
    with pytest.raises(DomainTooLarge):
        next(enumerate_mutants(M1, bound=30))


def test_conformance(S1, P1, M1):
    assert not conforms(S1, P1)
    assert not conforms(S1, P1, method="da")
    assert conforms(S1, S1)
    with pytest.raises(ValueError):
        conforms(S1, P1, method="guess")


def test_conforming_mutant_is_recognised():
    # a redundant copy of the initial state: the mutant routes through it but behaves the same
    rows = [
        Transition("a0", "io", 0, 0, inp=0, out=0),
        Transition("z0", "to", 0, 0, timeout=INF),
        Transition("a1", "io", 1, 1, inp=0, out=0),
        Transition("z1", "to", 1, 1, timeout=INF),
        Transition("m1", "io", 0, 1, inp=0, out=0, mutated=True),
    ]
    m = MutationMachine("R", ["p", "q"], "p", ["a"], ["x"], rows)
    (P,) = enumerate_mutants(m)
    assert conforms(m.spec, P) and conforms(m.spec, P, method="da")
    verdict = oracle_check_suite(m, [])
    assert verdict.complete and verdict.nonconforming == 0


def test_m1_mutants_all_nonconforming(M1):
    mutants, mask = classify_mutants(M1)
    assert len(mutants) == 31 and not mask.any()


def test_suite_verdicts(M1):
    verdict = oracle_check_suite(M1, [TimedSequence.parse(t) for t in FIVE_TESTS])
    assert verdict and verdict.undetected == 0 and verdict.nonconforming == 31
    partial = oracle_check_suite(M1, [E_INIT])
    assert not partial and partial.undetected == 19
    assert "t16" in partial.counterexample.chosen
    empty = oracle_check_suite(M1, [])
    assert empty.undetected == 31 and empty.counterexample is not None


def test_detection_matrix_matches_simulation(M1, S1):
    mutants = list(enumerate_mutants(M1))
    tests = [TimedSequence.parse(t) for t in FIVE_TESTS]
    D = detection_matrix(M1, mutants, tests)
    for k, P in enumerate(mutants):
        for j, t in enumerate(tests):
            assert D[k, j] == detects(S1, P, t)
    assert detection_matrix(M1, mutants, []).shape == (31, 0)


@pytest.mark.parametrize("seed", [3, 5, 9, 22])
def test_conforming_mutants_are_never_detected(seed):
    """A mutant declared conforming must survive any test we throw at it."""
    m = random_fault_model(3, 2, 2, 2, 4, 2.5, seed)
    mutants, mask = classify_mutants(m)
    assert mask.any() and not mask.all()
    rng = np.random.default_rng(seed)
    tests = []
    for _ in range(40):
        n = int(rng.integers(1, 7))
        times = np.cumsum(rng.integers(0, 14, size=n)) / 2
        tests.append(TimedSequence([(m.inputs[int(rng.integers(2))], Fraction(float(x)).limit_denominator(2)) for x in times]))
    D = detection_matrix(m, mutants, tests)
    assert not D[mask].any()
    assert D[~mask].any(axis=1).mean() > 0.5
