import pytest

from tfsmt.distinguishing import SINK, build_da, find_accepted_comb, revealing_combs, test_of_comb
from tfsmt.errors import MalformedTest
from tfsmt.machine import INF
from tfsmt.timed import TimedSequence, detects, replay

EXPECTED_COMBS = {
    "t3 t2 t6 t5 t17 t8 t12 t10",
    "t3 t2 t6 t5 t17 t8 t12 t13",
    "t3 t2 t6 t5 t17 t15 t17 t14",
    "t16 t2 t6 t5 t17 t8 t12 t10",
    "t16 t2 t6 t5 t17 t8 t12 t13",
    "t16 t2 t6 t5 t17 t15 t17 t14",
}


def test_da_of_m1(da_m1):
    assert da_m1.n_states == 25
    assert da_m1.has_sink()
    labels = {da_m1.state_label(c) for c in da_m1.states}
    assert "s2,s3,0,5" in labels
    assert "s1,s1,0,0" in labels
    assert {e.rule for e in da_m1.edges()} <= set(range(8))


def test_r6_edge_witnessed_by_longer_timeout(da_m1):
    c = next(c for c in da_m1.states if da_m1.state_label(c) == "s3,s3,0,0")
    edges = {(e.label, da_m1.state_label(e.target), e.witness, e.rule) for e in da_m1.timeout_edges(c)}
    assert (5, "s2,s3,0,5", "t17", 6) in edges
    assert (5, "s2,s2,0,0", "t9", 3) in edges


def test_no_sink_against_itself(S1):
    da = build_da(S1, S1)
    assert not da.has_sink()
    assert find_accepted_comb(da) is None


def test_revealing_combs_of_example(da_m1, alpha):
    combs = revealing_combs(da_m1, alpha)
    assert {str(c) for c in combs} == EXPECTED_COMBS
    susp = {frozenset(c.suspicious) for c in combs}
    assert frozenset({"t3", "t17", "t8", "t10"}) in susp
    assert all(len(c.suspicious) == 4 for c in combs)


def test_revealing_combs_replay_to_unexpected_outputs(M1, S1, da_m1, alpha):
    from tfsmt.timed import simulate

    expected = simulate(S1, alpha)
    for comb in revealing_combs(da_m1, alpha):
        got = replay(M1, comb.transitions, alpha)
        assert got.symbols != expected.symbols[: len(got)]
        # the difference shows only at the last input of the comb
        assert got.symbols[:-1] == expected.symbols[: len(got) - 1]


def test_revealing_combs_empty_cases(da_m1, S1):
    assert revealing_combs(da_m1, TimedSequence()) == set()
    assert revealing_combs(build_da(S1, S1), TimedSequence.parse("a@3 b@4")) == set()
    with pytest.raises(MalformedTest):
        revealing_combs(da_m1, TimedSequence.parse("c@1"))


def test_combs_stop_at_first_difference(da_m1):
    # (a,3) already reveals t16+t13 style faults; extending the test adds no longer combs for them
    short = {str(c) for c in revealing_combs(da_m1, TimedSequence.parse("a@3"))}
    longer = {str(c) for c in revealing_combs(da_m1, TimedSequence.parse("a@3 b@4"))}
    assert short <= longer
    assert not any(c != s and c.startswith(s + " ") for c in longer for s in short)


def test_accepted_comb_for_p1(S1, P1):
    run = find_accepted_comb(build_da(S1, P1))
    assert run is not None
    assert run.test == TimedSequence.parse("a@3")
    assert str(run.comb) == "t16 t12 t13"
    assert run.path[-1].target is SINK
    assert test_of_comb(None, run.path) == run.test
    assert detects(S1, P1, run.test)


def test_infinite_timeouts_never_fire(da_m1):
    inf_edges = [e for e in da_m1.edges() if not e.is_input and e.label == INF]
    assert inf_edges  # present in the automaton
    for e in inf_edges:
        assert e.rule in (0, 3)
