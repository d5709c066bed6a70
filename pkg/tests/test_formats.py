import pytest

from tfsmt.distinguishing import build_da
from tfsmt.errors import ParseError
from tfsmt.formats import TestSuite, export_dot, parse_machine, parse_suite, print_machine, print_suite
from tfsmt.models import BUNDLED, bundled_text, load_bundled
from tfsmt.timed import TimedSequence

HEADER = "tfsm T\nstates: p q\ninitial: p\ninputs: a\noutputs: x\ntransitions:\n"
GOOD_ROWS = "u1 io p a x q\nu2 to p inf p\nu3 io q a x p\nu4 to q 2 p\n"


def parse_error(text):
    with pytest.raises(ParseError) as exc:
        parse_machine(text)
    return exc.value


def test_round_trip_bundled():
    for name in BUNDLED:
        m = load_bundled(name)
        again = parse_machine(print_machine(m))
        assert print_machine(again) == print_machine(m)
        assert again.count_mutants() == m.count_mutants()


def test_m1_file(M1):
    assert bundled_text("m1").startswith("#")
    assert M1.count_mutants() == 31
    with pytest.raises(KeyError):
        bundled_text("nope")


def test_minimal_machine():
    m = parse_machine(HEADER + GOOD_ROWS)
    assert m.states == ("p", "q")
    assert m.count_mutants() == 0


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("", None, "empty"),
        ("machine T\n", 1, "tfsm"),
        ("tfsm T\nstates p q\n", 2, "section"),
        ("tfsm T\ncolours: red\n", 2, "unknown section"),
        ("tfsm T\nstates: p\nstates: q\n", 3, "twice"),
        ("tfsm T\ninitial: p q\n", 2, "exactly one"),
        (HEADER + "u1 io p a x q\nu1 to p inf p\n", 8, "duplicate transition id"),
        (HEADER + "u1 io p a q\n", 7, "expected"),
        (HEADER + "u1 to p soon p\n", 7, "positive integer"),
        (HEADER + "u1 to p 0 p\n", 7, ">= 1"),
        (HEADER + "u1 jump p q\n", 7, "unknown kind"),
        (HEADER + "u1 io p a z q\n", 7, "undeclared output"),
        (HEADER + "u1 io r a x q\n", 7, "undeclared state"),
        ("tfsm T\nstates: p\ninitial: r\ninputs: a\noutputs: x\ntransitions:\n", 3, "not declared"),
        ("tfsm T\nstates: p\ninitial: p\ninputs: a\noutputs: x\n", None, "transitions"),
    ],
)
def test_parse_errors(text, line, fragment):
    err = parse_error(text)
    assert err.line == line
    assert fragment in str(err)
    if line is not None:
        assert str(err).startswith(f"line {line}:")


def test_validation_is_optional():
    incomplete = HEADER + "u1 io p a x q\nu2 to p inf p\nu3 io q a x p\n"  # q has no timeout
    with pytest.raises(ParseError, match="invalid machine"):
        parse_machine(incomplete)
    m = parse_machine(incomplete, check=False)
    assert len(m.transitions) == 3


def test_comments_and_blank_lines():
    text = "# header\n\n" + HEADER.replace("inputs: a", "inputs: a   # one input") + GOOD_ROWS
    assert len(parse_machine(text).transitions) == 4


def test_suite_round_trip(M1):
    text = "b@0.5 a@1 b@6.7 a@7.2\n# comment\nε\na@1/3\na@3\na@3\n"
    suite = parse_suite(text, M1)
    assert len(suite) == 4  # duplicate dropped
    assert TimedSequence() in suite
    assert parse_suite(print_suite(suite)) == suite
    assert print_suite(suite).splitlines()[1] == "ε"
    assert parse_suite("eps\n") == TestSuite([TimedSequence()])


def test_suite_errors(M1):
    with pytest.raises(ParseError) as exc:
        parse_suite("a@1\nb@2 a@1\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc:
        parse_suite("a@1\n\nc@4\n", M1)
    assert exc.value.line == 3


def test_without_prefixes():
    suite = TestSuite(["a@1", "a@1 b@2", "b@0", "a@1 b@2 a@3"])
    assert [str(t) for t in suite.without_prefixes()] == ["b@0", "a@1 b@2 a@3"]


def test_machine_dot(M1):
    dot = export_dot(M1)
    assert dot.startswith('digraph "M1"')
    edges = [ln for ln in dot.splitlines() if "->" in ln and "__start" not in ln]
    assert len(edges) == 17
    assert sum("style=dashed" in ln for ln in edges) == 5
    nodes = [ln for ln in dot.splitlines() if ln.strip().startswith('"s') and "->" not in ln]
    assert len(nodes) == 4
    assert 'label="a/y [t13]", style=dashed' in dot


def test_da_dot(M1, S1, da_m1):
    dot = export_dot(da_m1)
    assert dot.count("->") == sum(1 for _ in da_m1.edges())
    assert "doublecircle" in dot
    assert "(R6)" in dot
    clean = export_dot(build_da(S1, S1))
    assert "doublecircle" not in clean
