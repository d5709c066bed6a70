"""Distinguishing automaton with timeouts and comb extraction.

The automaton pairs a deterministic specification with a (possibly
nondeterministic) mutation machine.  Its states are ``(s, m, x_s, x_m)``
with integer clock values or ``INF``; the sink :data:`SINK` is reached when
the two machines answer an input with different outputs.

Input edges come from rules 1-2 and timeout edges from rules 3-7:

=====  ==========================================  =========================
rule   condition (rs = δs - xs, rm = δm - xm)       target
=====  ==========================================  =========================
R3     rs == rm                                    (s', m', 0, 0)
R4     rm < rs, δs finite                          (s, m', xs + rm, 0)
R5     rm < rs, δs infinite                        (s, m', INF, 0)
R6     rs < rm, δm finite                          (s', m, 0, xm + rs)
R7     rs < rm, δm infinite                        (s', m, 0, INF)
=====  ==========================================  =========================

Every edge records the mutation-machine transition (its *witness*) that
defines it.  In R3-R5 the witness timeout fires; in R6/R7 it only permits
the mutation machine to keep waiting while the reference machine times out.

A *comb* lists, per visit of a mutation-machine state, the timeout that
fires (or the unexpired timeout permitting the wait before an input),
followed by the io transition taken on the input.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import MalformedTest
from .machine import INF, Submachine, sub_time
from .timed import TimedSequence, as_sequence


class _Sink:
    __slots__ = ()

    def __repr__(self):
        return "∇"

    def __reduce__(self):
        return "SINK"


SINK = _Sink()


@dataclass(frozen=True)
class DATransition:
    source: object
    label: object  # input name (R1/R2) or delay int/INF (R3-R7)
    target: object
    rule: int  # 1..7; 0 for the sink self-loops
    witness: str | None

    @property
    def is_input(self) -> bool:
        return isinstance(self.label, str)


@dataclass(frozen=True)
class Comb:
    transitions: tuple
    suspicious: frozenset

    def __str__(self):
        return " ".join(self.transitions)


@dataclass(frozen=True)
class AcceptedRun:
    """A path of the automaton to the sink together with its comb and test."""

    path: tuple
    comb: Comb
    test: TimedSequence


class DistAutomaton:
    def __init__(self, spec: Submachine, mut, initial, edges: dict):
        self.spec = spec
        self.mut = mut
        self.machine = mut.root
        self.initial = initial
        self._edges = edges
        self._inputs: dict = {}
        self._timeouts: dict = {}
        for c, out in edges.items():
            by_input: dict = {}
            tos = []
            for e in out:
                if e.is_input:
                    by_input.setdefault(e.label, []).append(e)
                else:
                    tos.append(e)
            self._inputs[c] = by_input
            self._timeouts[c] = tos
        self.classification = self.machine.classify()

    @property
    def states(self):
        return self._edges.keys()

    @property
    def n_states(self) -> int:
        """Number of non-sink states."""
        return len(self._edges) - (SINK in self._edges)

    def has_sink(self) -> bool:
        """Structural reachability of the sink (ignores time realizability)."""
        return SINK in self._edges

    def edges(self, c=None):
        if c is not None:
            return self._edges[c]
        return [e for out in self._edges.values() for e in out]

    def input_edges(self, c, inp: str):
        return self._inputs[c].get(inp, ())

    def timeout_edges(self, c):
        return self._timeouts[c]

    def state_label(self, c) -> str:
        if c is SINK:
            return "∇"
        s, m, xs, xm = c
        st = self.machine.states
        fmt = lambda x: "∞" if x == INF else str(x)
        return f"{st[s]},{st[m]},{fmt(xs)},{fmt(xm)}"

    def _spec_timeout(self, s):
        (t,) = self.spec.timeouts(s)
        return t


def build_da(spec: Submachine, mut) -> DistAutomaton:
    """Reachable fragment of the distinguishing automaton of ``spec`` and ``mut``.

    ``mut`` is the mutation machine itself or any submachine of it (a single
    mutant for the conformance check of that mutant).
    """
    machine = mut.root
    inputs = machine.inputs
    c0 = (spec.initial, mut.initial, 0, 0)
    edges: dict = {}
    queue = deque([c0])
    edges[c0] = None

    def visit(c):
        if c not in edges:
            edges[c] = None
            queue.append(c)

    while queue:
        c = queue.popleft()
        if c is SINK:
            edges[c] = [DATransition(SINK, i, SINK, 0, None) for i in inputs]
            edges[c].append(DATransition(SINK, INF, SINK, 0, None))
            continue
        s, m, xs, xm = c
        out = []
        for i, iname in enumerate(inputs):
            (st,) = spec.io(s, i)
            for t in mut.io(m, i):
                if t.out == st.out:
                    tgt = (st.dst, t.dst, 0, 0)
                    out.append(DATransition(c, iname, tgt, 1, t.id))
                else:
                    tgt = SINK
                    out.append(DATransition(c, iname, tgt, 2, t.id))
                visit(tgt)
        (sto,) = spec.timeouts(s)
        ds = sto.timeout
        rs = sub_time(ds, xs)
        for t in mut.timeouts(m):
            dm = t.timeout
            rm = sub_time(dm, xm)
            if not rm > 0:
                continue
            if rs == rm:
                tgt, rule, label = (sto.dst, t.dst, 0, 0), 3, rm
            elif rm < rs:
                label = rm
                if ds != INF:
                    tgt, rule = (s, t.dst, xs + rm, 0), 4
                else:
                    tgt, rule = (s, t.dst, INF, 0), 5
            else:
                label = rs
                if dm != INF:
                    tgt, rule = (sto.dst, m, 0, xm + rs), 6
                else:
                    tgt, rule = (sto.dst, m, 0, INF), 7
            out.append(DATransition(c, label, tgt, rule, t.id))
            visit(tgt)
        edges[c] = out
    return DistAutomaton(spec, mut, c0, edges)


# -- comb search ---------------------------------------------------------------


def _admit(choices: dict, tid: str, da: DistAutomaton):
    """Extend the per-group choices of a comb; ``None`` if the comb turns nondeterministic."""
    if not da.classification.is_suspicious(tid):
        return choices
    key = da.machine.by_id[tid].group
    have = choices.get(key)
    if have is None:
        new = dict(choices)
        new[key] = tid
        return new
    return choices if have == tid else None


def _witnesses(da: DistAutomaton, c, committed, elapsed):
    """Timeouts of the mutation state permitting a wait of ``elapsed`` in ``c``."""
    _, m, _, xm = c
    if committed is not None:
        cands = (da.machine.by_id[committed],)
    else:
        cands = da.mut.timeouts(m)
    for t in cands:
        if sub_time(t.timeout, xm) > elapsed:
            yield t.id


def _spec_waits(da: DistAutomaton, c, elapsed) -> bool:
    s, _, xs, _ = c
    return sub_time(da._spec_timeout(s).timeout, xs) > elapsed


def _timeout_moves(da, c, committed, choices, budget):
    """Timeout edges of ``c`` that fire within ``budget`` time units.

    Yields ``(edge, committed', choices', emitted)`` where ``emitted`` is the
    comb fragment the edge contributes.
    """
    for e in da.timeout_edges(c):
        if e.label == INF or e.label > budget:
            continue
        w = e.witness
        if committed is not None and committed != w:
            continue
        ch = _admit(choices, w, da)
        if ch is None:
            continue
        if e.rule in (6, 7):
            yield e, w, ch, ()
        else:
            yield e, None, ch, (w,)


def _input_moves(da, c, committed, choices, inp, elapsed):
    """Ways to apply ``inp`` after waiting ``elapsed`` in ``c``."""
    if not _spec_waits(da, c, elapsed):
        return
    edges = da.input_edges(c, inp)
    if not edges:
        return
    for w in _witnesses(da, c, committed, elapsed):
        chw = _admit(choices, w, da)
        if chw is None:
            continue
        for e in edges:
            ch = _admit(chw, e.witness, da)
            if ch is None:
                continue
            yield e, ch, (w, e.witness)


def _make_comb(da, seq) -> Comb:
    return Comb(tuple(seq), frozenset(t for t in seq if da.classification.is_suspicious(t)))


def revealing_combs(da: DistAutomaton, test) -> set:
    """All deterministic combs revealing a difference on ``test``.

    The search follows the test input by input.  Within the gap before an
    input it fires every sequence of automaton timeout edges fitting in the
    gap, then applies the input.  Combs stop at the first input where the
    outputs differ, so none extends a shorter revealing comb.
    """
    test = as_sequence(test)
    unknown = [s for s in test.symbols if s not in da.machine.input_index]
    if unknown:
        raise MalformedTest(f"unknown input symbol {unknown[0]!r}")
    found = set()
    frontier = [(da.initial, (), {})]
    prev = Fraction(0)
    for inp, when in test.items:
        gap = when - prev
        prev = when
        nxt = []
        for c, comb, choices in frontier:
            for tgt, comb2, ch2 in _interval(da, c, None, choices, gap, inp, comb):
                if tgt is SINK:
                    found.add(comb2)
                else:
                    nxt.append((tgt, comb2, ch2))
        frontier = nxt
        if not frontier:
            break
    return {_make_comb(da, seq) for seq in found}


def _interval(da, c, committed, choices, remaining, inp, comb) -> Iterator:
    for e, ch, emitted in _input_moves(da, c, committed, choices, inp, remaining):
        yield e.target, comb + emitted, ch
    for e, com2, ch, emitted in _timeout_moves(da, c, committed, choices, remaining):
        yield from _interval(da, e.target, com2, ch, remaining - e.label, inp, comb + emitted)


def test_of_comb(da: DistAutomaton, path) -> TimedSequence:
    """Timed input sequence of an automaton path: each input fires at the sum of prior delays."""
    now = 0
    items = []
    for e in path:
        if e.is_input:
            items.append((e.label, now))
        else:
            now += e.label
    return TimedSequence(items)


test_of_comb.__test__ = False  # keep pytest from collecting it


def find_accepted_comb(da: DistAutomaton) -> AcceptedRun | None:
    """Shortest (in automaton edges) accepted deterministic comb, or ``None``.

    Inputs are applied right when the automaton reaches a state, which loses
    nothing: the state after an input does not depend on how long the
    machines waited within a region.
    """
    if not da.has_sink():
        return None
    inputs = da.machine.inputs
    start = (da.initial, None, {})
    seen = {(da.initial, None, frozenset())}
    queue = deque([(start, (), ())])
    while queue:
        (c, committed, choices), path, comb = queue.popleft()
        for inp in inputs:
            for e, ch, emitted in _input_moves(da, c, committed, choices, inp, 0):
                if e.target is SINK:
                    full = path + (e,)
                    return AcceptedRun(full, _make_comb(da, comb + emitted), test_of_comb(da, full))
                key = (e.target, None, frozenset(ch.items()))
                if key not in seen:
                    seen.add(key)
                    queue.append(((e.target, None, ch), path + (e,), comb + emitted))
        for e, com2, ch, emitted in _timeout_moves(da, c, committed, choices, INF):
            key = (e.target, com2, frozenset(ch.items()))
            if key not in seen:
                seen.add(key)
                queue.append(((e.target, com2, ch), path + (e,), comb + emitted))
    return None


def has_accepted_comb(da: DistAutomaton) -> bool:
    return find_accepted_comb(da) is not None
