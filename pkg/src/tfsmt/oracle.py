"""Brute-force cross-checks: enumerate every mutant and test each one directly.

Nothing here touches the SAT encodings, so it can be used to validate them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator

import numpy as np

from .distinguishing import build_da
from .errors import DomainTooLarge
from .kernels import MachineTables, batch_conforms, batch_detects
from .machine import MutationMachine, Submachine
from .timed import as_sequence

DEFAULT_BOUND = 10**6


def enumerate_mutants(machine: MutationMachine, bound: int = DEFAULT_BOUND) -> Iterator[Submachine]:
    """Every selection of one transition per group except the reference machine's.

    Selections are extracted to their initially connected part but not
    deduplicated, so the count matches :meth:`MutationMachine.count_mutants`.
    """
    total = machine.count_mutants()
    if total > bound:
        raise DomainTooLarge(f"{machine.name} has {total} mutants (bound {bound})")
    groups = machine.groups()
    spec = machine.spec_ids
    for pick in product(*groups):
        ids = frozenset(t.id for t in pick)
        if ids <= spec:
            continue
        yield Submachine(machine, ids).extract()


def conforms(spec: Submachine, mutant: Submachine, method: str = "kernel") -> bool:
    """Whether ``mutant`` is timed-output equivalent to ``spec``.

    ``method="da"`` decides it by sink reachability in the distinguishing
    automaton instead of the table kernel.
    """
    if method == "da":
        return not build_da(spec, mutant).has_sink()
    if method != "kernel":
        raise ValueError(f"unknown method {method!r}")
    return bool(batch_conforms(MachineTables([spec]), MachineTables([mutant]))[0])


@dataclass(frozen=True)
class OracleVerdict:
    complete: bool
    counterexample: Submachine | None
    mutants: int
    nonconforming: int
    undetected: int

    def __bool__(self):
        return self.complete


def classify_mutants(machine: MutationMachine, bound: int = DEFAULT_BOUND, jit: bool | None = None):
    """All mutants with a conformance mask."""
    mutants = list(enumerate_mutants(machine, bound))
    if not mutants:
        return mutants, np.zeros(0, dtype=bool)
    mask = batch_conforms(MachineTables([machine.spec]), MachineTables(mutants), jit=jit)
    return mutants, mask


def detection_matrix(machine: MutationMachine, mutants, tests, jit: bool | None = None) -> np.ndarray:
    """``D[k, j]`` is true when test ``j`` detects mutant ``k``."""
    tests = [as_sequence(t) for t in tests]
    D = np.zeros((len(mutants), len(tests)), dtype=bool)
    if not mutants or not tests:
        return D
    spec_t = MachineTables([machine.spec])
    tables = MachineTables(mutants)
    for j, t in enumerate(tests):
        D[:, j] = batch_detects(spec_t, tables, machine, t, jit=jit)
    return D


def oracle_check_suite(fm, E, bound: int = DEFAULT_BOUND, jit: bool | None = None) -> OracleVerdict:
    """Complete iff every nonconforming mutant is detected by some test of ``E``."""
    machine = fm.machine if hasattr(fm, "machine") else fm
    mutants, conf = classify_mutants(machine, bound, jit)
    D = detection_matrix(machine, mutants, list(E), jit)
    undetected = np.flatnonzero(~conf & ~D.any(axis=1)) if mutants else np.zeros(0, dtype=int)
    cex = mutants[int(undetected[0])] if len(undetected) else None
    return OracleVerdict(
        complete=cex is None,
        counterexample=cex,
        mutants=len(mutants),
        nonconforming=int((~conf).sum()),
        undetected=len(undetected),
    )
