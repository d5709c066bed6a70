"""Seeded random fault models for benchmarks and property tests."""

from __future__ import annotations

import numpy as np

from .machine import INF, MutationMachine, Transition

INF_SPEC_PROB = 0.15  # chance that a non-initial spec state never times out


def random_spec_rows(rng, n_states, n_inputs, n_outputs, max_spec_timeout):
    """Transitions of a deterministic, complete, initially connected machine."""
    # slot 0..n_inputs-1 are inputs, slot n_inputs is the timeout
    slots = n_inputs + 1
    dst = rng.integers(0, n_states, size=(n_states, slots))
    # spanning tree: state k is entered from an earlier state through a random slot
    used = set()
    for k in range(1, n_states):
        while True:
            p = int(rng.integers(0, k))
            sl = int(rng.integers(0, slots))
            if (p, sl) not in used:
                break
        used.add((p, sl))
        dst[p, sl] = k
    delay = rng.integers(1, max_spec_timeout + 1, size=n_states).astype(object)
    tree_timeouts = {p for p, sl in used if sl == n_inputs}
    for s in range(n_states):
        if s not in tree_timeouts and rng.random() < INF_SPEC_PROB:
            delay[s] = INF
            dst[s, n_inputs] = s
    out = rng.integers(0, n_outputs, size=(n_states, n_inputs))
    rows = []
    for s in range(n_states):
        for i in range(n_inputs):
            rows.append(Transition(f"t{len(rows) + 1}", "io", s, int(dst[s, i]), inp=i, out=int(out[s, i])))
        rows.append(Transition(f"t{len(rows) + 1}", "to", s, int(dst[s, n_inputs]), timeout=delay[s]))
    return rows


def random_fault_model(
    states: int,
    inputs: int,
    outputs: int,
    max_spec_timeout: int,
    max_mut_timeout: int,
    mutation_degree: float,
    seed: int,
    name: str | None = None,
) -> MutationMachine:
    """Random specification plus mutated transitions until ``|Mut| >= 10**mutation_degree``.

    Degree 0 (or less) adds no mutated transition.  If the fault domain
    saturates before reaching the target the machine is returned as is.
    """
    for v, what in ((states, "states"), (inputs, "inputs"), (outputs, "outputs"),
                    (max_spec_timeout, "max_spec_timeout"), (max_mut_timeout, "max_mut_timeout")):
        if v < 1:
            raise ValueError(f"{what} must be positive")
    rng = np.random.default_rng(seed)
    rows = random_spec_rows(rng, states, inputs, outputs, max_spec_timeout)
    st = [f"s{k}" for k in range(states)]
    ins = [f"i{k}" for k in range(inputs)]
    outs = [f"o{k}" for k in range(outputs)]
    name = name or f"rand_{states}s_{inputs}i_{outputs}o_d{mutation_degree:g}_seed{seed}"
    base = MutationMachine(name, st, st[0], ins, outs, rows)
    if mutation_degree <= 0:
        return base

    target = 10**mutation_degree
    present = {(t.kind, t.src, t.inp, t.out, t.timeout, t.dst) for t in rows}
    sizes = {}
    for t in rows:
        sizes[t.group] = sizes.get(t.group, 0) + 1
    count = 1
    capacity = states * (inputs * outputs * states + max_mut_timeout * states + 1)
    n_mut = 0
    while count - 1 < target and len(present) < capacity:
        s = int(rng.integers(0, states))
        if rng.random() < inputs / (inputs + 1):
            i, o, d = int(rng.integers(0, inputs)), int(rng.integers(0, outputs)), int(rng.integers(0, states))
            key = ("io", s, i, o, None, d)
            t = Transition(f"m{n_mut + 1}", "io", s, d, inp=i, out=o, mutated=True)
        else:
            k = int(rng.integers(0, max_mut_timeout + 1))
            delay = INF if k == max_mut_timeout else k + 1
            d = s if delay == INF else int(rng.integers(0, states))
            key = ("to", s, None, None, delay, d)
            t = Transition(f"m{n_mut + 1}", "to", s, d, timeout=delay, mutated=True)
        if key in present:
            continue
        present.add(key)
        rows.append(t)
        n_mut += 1
        g = t.group
        count = count // sizes[g] * (sizes[g] + 1)
        sizes[g] += 1
    return MutationMachine(name, st, st[0], ins, outs, rows)
