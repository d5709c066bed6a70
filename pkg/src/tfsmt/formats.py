"""Text formats: machine files, test-suite files and Graphviz DOT.

Machine file grammar (line oriented, ``#`` starts a comment)::

    tfsm <name>
    states: <id>+
    initial: <id>
    inputs: <sym>+
    outputs: <sym>+
    transitions:
    <id> io <src> <input> <output> <dst> [mutated]
    <id> to <src> <posint|inf> <dst> [mutated]

Test suites hold one test per line, tokens ``<input>@<delay>``.
"""

from __future__ import annotations

from .errors import MachineError, MalformedTest, ParseError
from .machine import INF, MutationMachine, format_timeout, validate
from .timed import TimedSequence

_HEADERS = ("states", "initial", "inputs", "outputs")


def parse_machine(text: str, check: bool = True) -> MutationMachine:
    """Parse a machine file; with ``check`` the machine must also validate."""
    name = None
    header: dict[str, tuple[list[str], int]] = {}
    rows = []
    row_lines = []
    in_transitions = False
    seen_ids: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not in_transitions:
            if name is None:
                parts = line.split()
                if parts[0] != "tfsm" or len(parts) != 2:
                    raise ParseError("expected 'tfsm <name>' header", lineno)
                name = parts[1]
                continue
            key, sep, rest = line.partition(":")
            key = key.strip()
            if not sep:
                raise ParseError(f"expected '<section>: ...', got {line!r}", lineno)
            if key == "transitions":
                if rest.strip():
                    raise ParseError("'transitions:' takes no values on its line", lineno)
                in_transitions = True
                continue
            if key not in _HEADERS:
                raise ParseError(f"unknown section {key!r}", lineno)
            if key in header:
                raise ParseError(f"section {key!r} given twice", lineno)
            values = rest.split()
            if not values:
                raise ParseError(f"section {key!r} is empty", lineno)
            if key == "initial" and len(values) != 1:
                raise ParseError("exactly one initial state expected", lineno)
            header[key] = (values, lineno)
            continue

        parts = line.split()
        tid = parts[0]
        if tid in seen_ids:
            raise ParseError(f"duplicate transition id {tid!r} (first on line {seen_ids[tid]})", lineno)
        seen_ids[tid] = lineno
        mutated = parts[-1] == "mutated"
        body = parts[1:-1] if mutated else parts[1:]
        if not body:
            raise ParseError(f"transition {tid} has no kind", lineno)
        kind = body[0]
        if kind == "io":
            if len(body) != 5:
                raise ParseError(f"io transition {tid}: expected '<src> <input> <output> <dst>'", lineno)
            _, src, inp, out, dst = body
            rows.append((tid, "io", src, inp, out, dst, mutated))
        elif kind == "to":
            if len(body) != 4:
                raise ParseError(f"timeout transition {tid}: expected '<src> <timeout> <dst>'", lineno)
            _, src, delay, dst = body
            if delay == "inf":
                value = INF
            else:
                try:
                    value = int(delay)
                except ValueError:
                    raise ParseError(f"timeout of {tid} must be a positive integer or inf", lineno) from None
                if value < 1:
                    raise ParseError(f"timeout of {tid} must be >= 1", lineno)
            rows.append((tid, "to", src, value, dst, mutated))
        else:
            raise ParseError(f"transition {tid}: unknown kind {kind!r}", lineno)
        row_lines.append(lineno)

    if name is None:
        raise ParseError("empty machine file")
    for key in _HEADERS:
        if key not in header:
            raise ParseError(f"missing section {key!r}")
    if not in_transitions:
        raise ParseError("missing 'transitions:' section")

    states, _ = header["states"]
    (initial,), init_line = header["initial"]
    inputs, _ = header["inputs"]
    outputs, _ = header["outputs"]
    if initial not in states:
        raise ParseError(f"initial state {initial!r} is not declared", init_line)
    for section in ("states", "inputs", "outputs"):
        values, line = header[section]
        if len(set(values)) != len(values):
            raise ParseError(f"duplicate name in {section}", line)
    for row, line in zip(rows, row_lines):
        names = [(row[2], states, "state")]
        if row[1] == "io":
            names += [(row[3], inputs, "input"), (row[4], outputs, "output"), (row[5], states, "state")]
        else:
            names += [(row[4], states, "state")]
        for value, table, what in names:
            if value not in table:
                raise ParseError(f"transition {row[0]}: undeclared {what} {value!r}", line)
    try:
        machine = MutationMachine.from_rows(name, states, initial, inputs, outputs, rows)
    except MachineError as exc:
        raise ParseError(str(exc)) from None
    if check:
        diags = validate(machine)
        if diags:
            raise ParseError("invalid machine: " + "; ".join(diags))
    return machine


def print_machine(machine: MutationMachine) -> str:
    st, ins, outs = machine.states, machine.inputs, machine.outputs
    lines = [
        f"tfsm {machine.name}",
        "states: " + " ".join(st),
        "initial: " + st[machine.initial],
        "inputs: " + " ".join(ins),
        "outputs: " + " ".join(outs),
        "transitions:",
    ]
    for t in machine.transitions:
        if t.is_io:
            row = f"{t.id} io {st[t.src]} {ins[t.inp]} {outs[t.out]} {st[t.dst]}"
        else:
            row = f"{t.id} to {st[t.src]} {format_timeout(t.timeout)} {st[t.dst]}"
        lines.append(row + (" mutated" if t.mutated else ""))
    return "\n".join(lines) + "\n"


class TestSuite:
    """Ordered collection of distinct tests."""

    __test__ = False  # not a pytest class

    def __init__(self, tests=()):
        self._tests: list[TimedSequence] = []
        self._seen: set = set()
        for t in tests:
            self.add(t)

    def add(self, test) -> bool:
        if not isinstance(test, TimedSequence):
            test = TimedSequence.parse(test) if isinstance(test, str) else TimedSequence(test)
        if test in self._seen:
            return False
        self._seen.add(test)
        self._tests.append(test)
        return True

    def __iter__(self):
        return iter(self._tests)

    def __len__(self):
        return len(self._tests)

    def __contains__(self, test):
        return test in self._seen

    def __getitem__(self, k):
        return self._tests[k]

    def __repr__(self):
        return f"TestSuite({[str(t) for t in self._tests]})"

    def __eq__(self, other):
        return isinstance(other, TestSuite) and self._tests == other._tests

    def without_prefixes(self) -> "TestSuite":
        """Drop every test that is a proper prefix of another test."""
        keep = [
            t for t in self._tests
            if not any(len(o) > len(t) and t.is_prefix_of(o) for o in self._tests)
        ]
        return TestSuite(keep)


def parse_suite(text: str, machine: MutationMachine | None = None) -> TestSuite:
    suite = TestSuite()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("ε", "eps"):
            test = TimedSequence()
        else:
            try:
                test = TimedSequence.parse(line)
            except MalformedTest as exc:
                raise ParseError(str(exc), lineno) from None
        if machine is not None:
            for sym in test.symbols:
                if sym not in machine.input_index:
                    raise ParseError(f"unknown input symbol {sym!r}", lineno)
        suite.add(test)
    return suite


def print_suite(suite) -> str:
    return "".join((str(t) if len(t) else "ε") + "\n" for t in suite)


# -- DOT -----------------------------------------------------------------------


def _q(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def machine_to_dot(machine: MutationMachine) -> str:
    lines = [f"digraph {_q(machine.name)} {{", "  rankdir=LR;", "  node [shape=circle];"]
    lines.append('  __start [shape=point, label=""];')
    for s in machine.states:
        lines.append(f"  {_q(s)};")
    lines.append(f"  __start -> {_q(machine.states[machine.initial])};")
    for t in machine.transitions:
        label = f"{machine.transition_label(t)} [{t.id}]"
        style = ", style=dashed" if t.mutated else ""
        lines.append(
            f"  {_q(machine.states[t.src])} -> {_q(machine.states[t.dst])} [label={_q(label)}{style}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def da_to_dot(da) -> str:
    from .distinguishing import SINK

    def fmt_label(e):
        if e.is_input:
            lab = e.label
        else:
            lab = "∞" if e.label == INF else str(e.label)
        if e.rule:
            return f"{lab} [{e.witness}] (R{e.rule})"
        return lab

    lines = ["digraph DA {", "  node [shape=box];"]
    for c in da.states:
        label = da.state_label(c)
        shape = ", shape=doublecircle" if c is SINK else ""
        lines.append(f"  {_q(label)} [label={_q(label)}{shape}];")
    for e in da.edges():
        lines.append(
            f"  {_q(da.state_label(e.source))} -> {_q(da.state_label(e.target))} [label={_q(fmt_label(e))}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj) -> str:
    if isinstance(obj, MutationMachine):
        return machine_to_dot(obj)
    return da_to_dot(obj)
