"""Bundled example models and the mutation-machine constructions used for TFTP."""

from __future__ import annotations

from importlib import resources

from .formats import parse_machine
from .machine import INF, MutationMachine, Transition

BUNDLED = ("m1", "tftp", "tftp_spec")


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise KeyError(f"no bundled model {name!r}; choose from {', '.join(BUNDLED)}")
    return resources.files("tfsmt.data").joinpath(f"{name}.tfsm").read_text(encoding="utf-8")


def load_bundled(name: str) -> MutationMachine:
    return parse_machine(bundled_text(name))


def m1() -> MutationMachine:
    return load_bundled("m1")


def p1(machine: MutationMachine | None = None):
    """The mutant with the shortened timeout t16 and the output/transfer fault t13."""
    machine = machine or m1()
    return machine.mutant("t16", "t13")


def _spec_transitions(spec: MutationMachine) -> list[Transition]:
    return [t for t in spec.transitions if not t.mutated]


def tftp_mutation_machine(
    spec: MutationMachine, extra_timeouts=(1, 5), undefined_output: str = "NotDefined"
) -> MutationMachine:
    """Mutation machine for the TFTP specification.

    In every non-initial state the timeouts in ``extra_timeouts`` (towards the
    spec timeout's target) and an infinite self-loop timeout are added.  For
    every (state, input) whose specified output is not ``undefined_output``,
    an io transition to every state with every output is added.
    """
    transitions = _spec_transitions(spec)
    present = {(t.kind, t.src, t.inp, t.out, t.timeout, t.dst) for t in transitions}
    n = len(transitions)

    def add(t: Transition):
        nonlocal n
        key = (t.kind, t.src, t.inp, t.out, t.timeout, t.dst)
        if key not in present:
            present.add(key)
            transitions.append(t)
            n += 1

    undefined = spec.output_index[undefined_output]
    st = spec.states
    for s in range(len(st)):
        if s == spec.initial:
            continue
        (sto,) = [t for t in spec.timeouts(s) if not t.mutated]
        for k, delay in enumerate(extra_timeouts):
            add(Transition(f"{st[s]}_to{delay}", "to", s, sto.dst, timeout=delay, mutated=True))
        add(Transition(f"{st[s]}_toinf", "to", s, s, timeout=INF, mutated=True))
    for s in range(len(st)):
        for i in range(len(spec.inputs)):
            (base,) = [t for t in spec.io(s, i) if not t.mutated]
            if base.out == undefined:
                continue
            for d in range(len(st)):
                for o in range(len(spec.outputs)):
                    tid = f"{st[s]}_{spec.inputs[i]}_{spec.outputs[o]}_{st[d]}"
                    add(Transition(tid, "io", s, d, inp=i, out=o, mutated=True))
    return MutationMachine(spec.name, spec.states, st[spec.initial], spec.inputs, spec.outputs, transitions)


def chaos_machine(spec: MutationMachine, max_timeout: int = 5) -> MutationMachine:
    """Every io transition for every (input, output, target) and every timeout 1..max and inf."""
    transitions = _spec_transitions(spec)
    present = {(t.kind, t.src, t.inp, t.out, t.timeout, t.dst) for t in transitions}
    st = spec.states
    delays = list(range(1, max_timeout + 1)) + [INF]
    for s in range(len(st)):
        for i in range(len(spec.inputs)):
            for o in range(len(spec.outputs)):
                for d in range(len(st)):
                    if ("io", s, i, o, None, d) not in present:
                        tid = f"c_{st[s]}_{spec.inputs[i]}_{spec.outputs[o]}_{st[d]}"
                        transitions.append(Transition(tid, "io", s, d, inp=i, out=o, mutated=True))
        for delay in delays:
            for d in range(len(st)):
                if ("to", s, None, None, delay, d) not in present:
                    tid = f"c_{st[s]}_to{'inf' if delay == INF else delay}_{st[d]}"
                    transitions.append(Transition(tid, "to", s, d, timeout=delay, mutated=True))
    return MutationMachine(spec.name + "_chaos", spec.states, st[spec.initial], spec.inputs, spec.outputs, transitions)
