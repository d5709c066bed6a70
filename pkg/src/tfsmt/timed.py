"""Timed input/output sequences and the execution semantics of deterministic machines.

Delays are absolute times from the start of the execution, held as exact
:class:`fractions.Fraction` values so that boundary comparisons against
integer timeouts are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidComb, MalformedTest, NondeterministicMachine
from .machine import INF, Submachine


def to_delay(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # floats go through repr so 0.1 stays 1/10
        return Fraction(repr(value))
    return Fraction(value)


def format_delay(value: Fraction) -> str:
    """Shortest exact decimal when one exists, ``p/q`` otherwise."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    whole = str(abs(scaled.numerator))
    whole = whole.rjust(digits + 1, "0")
    return f"{sign}{whole[:-digits]}.{whole[-digits:]}"


@dataclass(frozen=True)
class TimedSequence:
    """Pairs ``(symbol, absolute delay)`` with non-decreasing delays."""

    items: tuple

    def __init__(self, items: Iterable = ()):
        pairs = tuple((str(sym), to_delay(d)) for sym, d in items)
        prev = Fraction(0)
        for sym, d in pairs:
            if d < 0:
                raise MalformedTest(f"negative delay {format_delay(d)} for {sym}")
            if d < prev:
                raise MalformedTest(
                    f"delays decrease: {sym}@{format_delay(d)} after {format_delay(prev)}"
                )
            prev = d
        object.__setattr__(self, "items", pairs)

    @classmethod
    def parse(cls, text: str) -> "TimedSequence":
        """Parse ``"b@0.5 a@1"``; an empty string is the empty sequence."""
        pairs = []
        for token in text.split():
            sym, sep, delay = token.rpartition("@")
            if not sep or not sym:
                raise MalformedTest(f"bad token {token!r}, expected <symbol>@<delay>")
            try:
                pairs.append((sym, Fraction(delay)))
            except (ValueError, ZeroDivisionError):
                raise MalformedTest(f"bad delay in token {token!r}") from None
        return cls(pairs)

    def __str__(self):
        return " ".join(f"{s}@{format_delay(d)}" for s, d in self.items)

    def __repr__(self):
        return "".join(f"({s},{format_delay(d)})" for s, d in self.items) or "()"

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, k):
        if isinstance(k, slice):
            return TimedSequence(self.items[k])
        return self.items[k]

    @property
    def symbols(self) -> tuple:
        return tuple(s for s, _ in self.items)

    @property
    def delays(self) -> tuple:
        return tuple(d for _, d in self.items)

    def is_prefix_of(self, other: "TimedSequence") -> bool:
        return len(self) <= len(other) and other.items[: len(self)] == self.items


TimedInputSequence = TimedSequence
TimedOutputSequence = TimedSequence


def as_sequence(test) -> TimedSequence:
    if isinstance(test, TimedSequence):
        return test
    if isinstance(test, str):
        return TimedSequence.parse(test)
    return TimedSequence(test)


def _input_indices(machine, test: TimedSequence) -> list[int]:
    try:
        return [machine.input_index[s] for s in test.symbols]
    except KeyError as exc:
        raise MalformedTest(f"unknown input symbol {exc.args[0]!r}") from None


def simulate(selection: Submachine, test) -> TimedSequence:
    """Timed output sequence of a deterministic complete selection on ``test``.

    Between inputs the single timeout of the current state fires, possibly
    several times in a row, while the time spent in the state reaches it.
    An input arriving exactly when a timeout expires is applied after that
    timeout has fired.
    """
    test = as_sequence(test)
    if not (selection.is_deterministic() and selection.is_complete()):
        raise NondeterministicMachine(f"{selection!r} is not deterministic and complete")
    machine = selection.machine
    inputs = _input_indices(machine, test)
    state = selection.initial
    entered = Fraction(0)
    out = []
    for i, (_, when) in zip(inputs, test.items):
        while True:
            (to,) = selection.timeouts(state)
            if to.timeout == INF or entered + to.timeout > when:
                break
            entered += to.timeout
            state = to.dst
        (t,) = selection.io(state, i)
        out.append((machine.outputs[t.out], when))
        state = t.dst
        entered = when
    return TimedSequence(out)


def detects(spec: Submachine, mutant: Submachine, test) -> bool:
    test = as_sequence(test)
    return simulate(spec, test) != simulate(mutant, test)


def replay(view, comb: Sequence[str], test) -> TimedSequence:
    """Check that ``comb`` permits an execution of ``view`` on a prefix of ``test``.

    The comb lists, for every input, the timeout transitions fired while
    waiting, then the timeout transition whose unexpired timeout permits the
    wait up to the input, then the input/output transition.  Returns the
    timed output sequence of that execution (one output per io transition
    of the comb).  Works on nondeterministic machines since the comb fixes
    every choice.
    """
    test = as_sequence(test)
    machine = view.root
    inputs = _input_indices(machine, test)
    by_id = machine.by_id
    try:
        seq = [by_id[tid] for tid in comb]
    except KeyError as exc:
        raise InvalidComb(f"unknown transition {exc.args[0]!r}") from None
    allowed = set(t.id for t in view.transitions) if hasattr(view, "chosen") else None
    if allowed is not None:
        foreign = [t.id for t in seq if t.id not in allowed]
        if foreign:
            raise InvalidComb(f"transitions {foreign} are not in the machine")

    state = view.initial
    entered = Fraction(0)
    out = []
    pos = 0
    for k, (i, (_, when)) in enumerate(zip(inputs, test.items)):
        if pos == len(seq):
            break
        # segment: TO* IO, the last TO being the waiting witness
        end = pos
        while end < len(seq) and seq[end].is_timeout:
            end += 1
        if end == len(seq):
            raise InvalidComb(f"comb ends without an io transition for input {k + 1}")
        if end == pos:
            raise InvalidComb(f"io transition {seq[end].id} is not preceded by a waiting timeout")
        *fired, witness = seq[pos:end]
        for t in fired:
            if t.src != state:
                raise InvalidComb(f"timeout {t.id} does not leave state {machine.states[state]}")
            if t.timeout == INF or entered + t.timeout > when:
                raise InvalidComb(f"timeout {t.id} cannot expire before input {k + 1}")
            entered += t.timeout
            state = t.dst
        if witness.src != state:
            raise InvalidComb(f"timeout {witness.id} does not leave state {machine.states[state]}")
        if witness.timeout != INF and when - entered >= witness.timeout:
            raise InvalidComb(f"timeout {witness.id} has expired before input {k + 1}")
        t = seq[end]
        if t.src != state or t.inp != i:
            raise InvalidComb(f"io transition {t.id} does not accept input {k + 1} in {machine.states[state]}")
        out.append((machine.outputs[t.out], when))
        state = t.dst
        entered = when
        pos = end + 1
    if pos != len(seq):
        raise InvalidComb("comb is longer than the execution of the test")
    return TimedSequence(out)
