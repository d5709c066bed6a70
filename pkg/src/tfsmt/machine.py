"""Timed FSMs with timeouts, mutation machines and their submachines.

A :class:`MutationMachine` holds every transition of the fault domain.
Transitions not flagged ``mutated`` form the reference machine (the
specified behaviour), which must be deterministic, complete and initially
connected.  Any deterministic complete choice of one transition per input
group ``(state, input)`` and per timeout group ``state`` is a submachine;
those that differ from the reference machine are mutants.

States and symbols are interned to dense indices; names are kept for
reporting and serialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import MachineError

INF = math.inf


def sub_time(a, b):
    """``a - b`` on ``N ∪ {∞}`` with the convention ``∞ - x = ∞``."""
    if a == INF:
        return INF
    return a - b


def add_time(a, b):
    if a == INF or b == INF:
        return INF
    return a + b


def format_timeout(value) -> str:
    return "inf" if value == INF else str(value)


@dataclass(frozen=True)
class Transition:
    """One input/output (``kind == "io"``) or timeout (``kind == "to"``) transition.

    ``src``/``dst``/``inp``/``out`` are dense indices into the owning
    machine's state, input and output tuples; ``inp``/``out`` are ``None``
    on timeout transitions and ``timeout`` is ``None`` on io transitions.
    """

    id: str
    kind: str
    src: int
    dst: int
    inp: int | None = None
    out: int | None = None
    timeout: int | float | None = None
    mutated: bool = False

    @property
    def is_io(self) -> bool:
        return self.kind == "io"

    @property
    def is_timeout(self) -> bool:
        return self.kind == "to"

    @property
    def group(self) -> tuple:
        """Key of the exactly-one group the transition competes in."""
        if self.kind == "io":
            return ("io", self.src, self.inp)
        return ("to", self.src)


@dataclass(frozen=True)
class TransitionClassification:
    trusted: frozenset
    untrusted: frozenset
    mutated: frozenset

    @property
    def suspicious(self) -> frozenset:
        return self.untrusted | self.mutated

    def is_suspicious(self, tid: str) -> bool:
        return tid in self.untrusted or tid in self.mutated


class MutationMachine:
    """A nondeterministic TFSM-T whose unflagged transitions form the reference machine."""

    def __init__(
        self,
        name: str,
        states: Sequence[str],
        initial: str,
        inputs: Sequence[str],
        outputs: Sequence[str],
        transitions: Iterable[Transition],
    ):
        self.name = name
        self.states = tuple(states)
        self.inputs = tuple(inputs)
        self.outputs = tuple(outputs)
        for label, names in (("state", self.states), ("input", self.inputs), ("output", self.outputs)):
            if len(set(names)) != len(names):
                raise MachineError(f"duplicate {label} name")
        if initial not in self.states:
            raise MachineError(f"initial state {initial!r} is not declared")
        self.state_index = {s: k for k, s in enumerate(self.states)}
        self.input_index = {s: k for k, s in enumerate(self.inputs)}
        self.output_index = {s: k for k, s in enumerate(self.outputs)}
        self.initial = self.state_index[initial]
        self.transitions = tuple(transitions)

        self.by_id: dict[str, Transition] = {}
        for t in self.transitions:
            if t.id in self.by_id:
                raise MachineError(f"duplicate transition id {t.id!r}")
            self._check_ranges(t)
            self.by_id[t.id] = t
        self.order = {t.id: k for k, t in enumerate(self.transitions)}

        self._io: dict[tuple[int, int], tuple[Transition, ...]] = {}
        self._to: dict[int, tuple[Transition, ...]] = {}
        io_acc: dict = {}
        to_acc: dict = {}
        for t in self.transitions:
            if t.is_io:
                io_acc.setdefault((t.src, t.inp), []).append(t)
            else:
                to_acc.setdefault(t.src, []).append(t)
        self._io = {k: tuple(v) for k, v in io_acc.items()}
        self._to = {k: tuple(v) for k, v in to_acc.items()}

    def _check_ranges(self, t: Transition) -> None:
        n = len(self.states)
        if not (0 <= t.src < n and 0 <= t.dst < n):
            raise MachineError(f"transition {t.id} references an undeclared state")
        if t.kind == "io":
            if t.inp is None or not 0 <= t.inp < len(self.inputs):
                raise MachineError(f"transition {t.id} references an undeclared input")
            if t.out is None or not 0 <= t.out < len(self.outputs):
                raise MachineError(f"transition {t.id} references an undeclared output")
        elif t.kind == "to":
            if t.timeout is None:
                raise MachineError(f"timeout transition {t.id} has no timeout value")
        else:
            raise MachineError(f"transition {t.id} has unknown kind {t.kind!r}")

    @classmethod
    def from_rows(cls, name, states, initial, inputs, outputs, rows) -> "MutationMachine":
        """Build from name-level rows.

        Rows are ``(id, "io", src, inp, out, dst[, mutated])`` or
        ``(id, "to", src, timeout, dst[, mutated])``; ``timeout`` may be an
        int, ``math.inf`` or the string ``"inf"``.
        """
        s_idx = {s: k for k, s in enumerate(states)}
        i_idx = {s: k for k, s in enumerate(inputs)}
        o_idx = {s: k for k, s in enumerate(outputs)}

        def lookup(table, key, what, tid):
            try:
                return table[key]
            except KeyError:
                raise MachineError(f"transition {tid} references undeclared {what} {key!r}") from None

        transitions = []
        for row in rows:
            tid, kind = row[0], row[1]
            if kind == "io":
                _, _, src, inp, out, dst, *rest = row
                transitions.append(
                    Transition(
                        tid,
                        "io",
                        lookup(s_idx, src, "state", tid),
                        lookup(s_idx, dst, "state", tid),
                        inp=lookup(i_idx, inp, "input", tid),
                        out=lookup(o_idx, out, "output", tid),
                        mutated=bool(rest and rest[0]),
                    )
                )
            elif kind == "to":
                _, _, src, delay, dst, *rest = row
                if delay == "inf":
                    delay = INF
                transitions.append(
                    Transition(
                        tid,
                        "to",
                        lookup(s_idx, src, "state", tid),
                        lookup(s_idx, dst, "state", tid),
                        timeout=delay,
                        mutated=bool(rest and rest[0]),
                    )
                )
            else:
                raise MachineError(f"transition {tid} has unknown kind {kind!r}")
        return cls(name, states, initial, inputs, outputs, transitions)

    def __repr__(self):
        return (
            f"MutationMachine({self.name!r}, states={len(self.states)}, "
            f"transitions={len(self.transitions)}, mutated={len(self.mutated_ids)})"
        )

    # -- structure -----------------------------------------------------------

    @property
    def root(self) -> "MutationMachine":
        return self

    def io(self, s: int, i: int) -> tuple[Transition, ...]:
        return self._io.get((s, i), ())

    def timeouts(self, s: int) -> tuple[Transition, ...]:
        return self._to.get(s, ())

    def groups(self) -> list[tuple[Transition, ...]]:
        """Every exactly-one group in canonical order: io groups, then timeout groups."""
        out = []
        for s in range(len(self.states)):
            for i in range(len(self.inputs)):
                g = self.io(s, i)
                if g:
                    out.append(g)
        for s in range(len(self.states)):
            g = self.timeouts(s)
            if g:
                out.append(g)
        return out

    @cached_property
    def mutated_ids(self) -> frozenset:
        return frozenset(t.id for t in self.transitions if t.mutated)

    @cached_property
    def spec_ids(self) -> frozenset:
        return frozenset(t.id for t in self.transitions if not t.mutated)

    @cached_property
    def spec(self) -> "Submachine":
        return Submachine(self, self.spec_ids)

    @cached_property
    def max_timeout(self) -> int:
        finite = [t.timeout for t in self.transitions if t.is_timeout and t.timeout != INF]
        return max(finite, default=0)

    def transition_label(self, t: Transition) -> str:
        if t.is_io:
            return f"{self.inputs[t.inp]}/{self.outputs[t.out]}"
        return format_timeout(t.timeout)

    # -- operations ----------------------------------------------------------

    def classify(self) -> TransitionClassification:
        return self._classification

    @cached_property
    def _classification(self) -> TransitionClassification:
        trusted, untrusted, mutated = set(), set(), set()
        for group in self.groups():
            competing = len(group) > 1
            for t in group:
                if not competing:
                    # a lone mutated transition has no spec competitor only on an invalid machine
                    (mutated if t.mutated else trusted).add(t.id)
                elif t.mutated:
                    mutated.add(t.id)
                else:
                    untrusted.add(t.id)
        return TransitionClassification(frozenset(trusted), frozenset(untrusted), frozenset(mutated))

    def count_mutants(self) -> int:
        total = 1
        for group in self.groups():
            total *= len(group)
        return max(total - 1, 0)

    def selection(self, chosen: Iterable[str]) -> "Submachine":
        chosen = frozenset(chosen)
        unknown = chosen - self.by_id.keys()
        if unknown:
            raise MachineError(f"unknown transition ids: {sorted(unknown)}")
        return Submachine(self, chosen)

    def mutant(self, *ids: str) -> "Submachine":
        """The reference machine with each given transition replacing its choice of its group."""
        chosen = set(self.spec_ids)
        for tid in ids:
            t = self.by_id[tid]
            for other in self._group_of(t):
                chosen.discard(other.id)
            chosen.add(tid)
        return Submachine(self, frozenset(chosen))

    def _group_of(self, t: Transition) -> tuple[Transition, ...]:
        return self.io(t.src, t.inp) if t.is_io else self.timeouts(t.src)


@dataclass(frozen=True, eq=False)
class Submachine:
    """A choice of transitions of ``machine``; deterministic and complete ones are mutants."""

    machine: MutationMachine
    chosen: frozenset

    def __eq__(self, other):
        return (
            isinstance(other, Submachine)
            and self.machine is other.machine
            and self.chosen == other.chosen
        )

    def __hash__(self):
        return hash(self.chosen)

    def __repr__(self):
        ids = sorted(self.chosen, key=self.machine.order.__getitem__)
        return f"Submachine({' '.join(ids)})"

    @property
    def root(self) -> MutationMachine:
        return self.machine

    @property
    def initial(self) -> int:
        return self.machine.initial

    @property
    def states(self):
        return self.machine.states

    @property
    def inputs(self):
        return self.machine.inputs

    @property
    def outputs(self):
        return self.machine.outputs

    @cached_property
    def _io(self):
        return {
            key: tuple(t for t in group if t.id in self.chosen)
            for key, group in self.machine._io.items()
        }

    @cached_property
    def _to(self):
        return {
            key: tuple(t for t in group if t.id in self.chosen)
            for key, group in self.machine._to.items()
        }

    def io(self, s: int, i: int) -> tuple[Transition, ...]:
        return self._io.get((s, i), ())

    def timeouts(self, s: int) -> tuple[Transition, ...]:
        return self._to.get(s, ())

    @cached_property
    def transitions(self) -> tuple[Transition, ...]:
        return tuple(t for t in self.machine.transitions if t.id in self.chosen)

    @cached_property
    def suspicious(self) -> frozenset:
        return self.chosen & self.machine.classify().suspicious

    @cached_property
    def reachable_states(self) -> frozenset:
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            s = stack.pop()
            for t in self.transitions:
                if t.src == s and t.dst not in seen:
                    seen.add(t.dst)
                    stack.append(t.dst)
        return frozenset(seen)

    def is_deterministic(self) -> bool:
        """At most one io transition per (state, input), exactly one timeout per reachable state."""
        for s in self.reachable_states:
            if len(self.timeouts(s)) != 1:
                return False
            for i in range(len(self.inputs)):
                if len(self.io(s, i)) > 1:
                    return False
        return True

    def is_complete(self) -> bool:
        return all(
            self.io(s, i) for s in self.reachable_states for i in range(len(self.inputs))
        )

    def is_mutant(self) -> bool:
        return (
            self.is_deterministic()
            and self.is_complete()
            and self.extract() != self.machine.spec.extract()
        )

    def extract(self) -> "Submachine":
        """Keep only chosen transitions connected to the initial state."""
        reach = self.reachable_states
        kept = frozenset(t.id for t in self.transitions if t.src in reach)
        if kept == self.chosen:
            return self
        return Submachine(self.machine, kept)


def extract_submachine(selection: Submachine) -> Submachine:
    return selection.extract()


def classify(machine: MutationMachine) -> TransitionClassification:
    return machine.classify()


def count_mutants(machine: MutationMachine) -> int:
    """Number of mutants, ``prod |group| - 1``, as an exact integer."""
    return machine.count_mutants()


def validate(machine: MutationMachine) -> list[str]:
    """Diagnostics for every violated machine invariant; empty when the machine is valid."""
    diags = []
    names = machine.states
    for t in machine.transitions:
        if t.is_timeout and t.timeout != INF:
            if not isinstance(t.timeout, int) or t.timeout < 1:
                diags.append(f"transition {t.id} has timeout {t.timeout}; finite timeouts must be integers >= 1")
    for s, sname in enumerate(names):
        if not machine.timeouts(s):
            diags.append(f"state {sname} defines no timeout transition")
        spec_to = [t for t in machine.timeouts(s) if not t.mutated]
        if not spec_to:
            diags.append(f"state {sname} has no specification timeout transition")
        elif len(spec_to) > 1:
            ids = ", ".join(t.id for t in spec_to)
            diags.append(f"state {sname} has several specification timeout transitions ({ids})")
        for i, iname in enumerate(machine.inputs):
            spec_io = [t for t in machine.io(s, i) if not t.mutated]
            if not spec_io:
                diags.append(f"specification is incomplete: state {sname} has no transition on input {iname}")
            elif len(spec_io) > 1:
                ids = ", ".join(t.id for t in spec_io)
                diags.append(f"specification is nondeterministic: state {sname} input {iname} ({ids})")
    spec = machine.spec
    unreachable = [names[s] for s in range(len(names)) if s not in spec.reachable_states]
    if unreachable:
        diags.append("specification is not initially connected: unreachable " + ", ".join(unreachable))
    return diags
