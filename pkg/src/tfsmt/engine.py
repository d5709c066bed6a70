"""Completeness verification and complete test-suite generation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cached_property

from .distinguishing import DistAutomaton, build_da, find_accepted_comb, revealing_combs
from .encoding import CnfFormula, VarMap, decode, encode_exclude, encode_not_phi_alpha, encode_phi_m
from .errors import NoUntrustedTransitions
from .formats import TestSuite
from .machine import MutationMachine, Submachine
from .sat import CdclSolver
from .timed import TimedSequence, as_sequence


class _Epsilon:
    """Marker returned when no surviving nonconforming mutant exists."""

    __slots__ = ()

    def __repr__(self):
        return "ε"

    def __bool__(self):
        return False

    def __reduce__(self):
        return "EPSILON"


EPSILON = _Epsilon()


@dataclass(eq=False)
class FaultModel:
    machine: MutationMachine
    spec: Submachine | None = None

    def __post_init__(self):
        if self.spec is None:
            self.spec = self.machine.spec
        elif self.spec != self.machine.spec:
            raise ValueError("spec must be the machine's flagged specification")

    @cached_property
    def da(self) -> DistAutomaton:
        return build_da(self.spec, self.machine)

    @cached_property
    def varmap(self) -> VarMap:
        return VarMap(self.machine)

    def phi_m(self) -> CnfFormula:
        return encode_phi_m(self.machine, self.varmap)


@dataclass
class EngineStats:
    solver_calls: int = 0
    conforming_excluded: int = 0
    tests_added: int = 0
    revealing_combs: int = 0
    seconds: float = 0.0
    log: list = field(default_factory=list)


def not_phi_alpha(da: DistAutomaton, vm: VarMap, test) -> CnfFormula:
    return encode_not_phi_alpha(revealing_combs(da, test), vm)


def verify_completeness(
    fd: CnfFormula,
    E,
    da: DistAutomaton,
    vm: VarMap | None = None,
    solver=None,
    stats: EngineStats | None = None,
):
    """Search for a mutant surviving ``E`` that does not conform.

    Returns ``(fd', result)``: ``result`` is a test detecting such a mutant, or
    :data:`EPSILON` when every mutant surviving ``E`` conforms.  ``fd'`` carries
    the revealing-comb constraints of ``E`` and the exclusions of conforming
    mutants met on the way.
    """
    vm = vm or VarMap(da.machine)
    solver = solver or CdclSolver()
    stats = stats if stats is not None else EngineStats()
    fd = fd & CnfFormula(num_vars=len(vm))
    for alpha in E:
        clauses = not_phi_alpha(da, vm, alpha)
        stats.revealing_combs += len(clauses)
        fd = fd & clauses
    while True:
        stats.solver_calls += 1
        res = solver.solve(fd, len(vm))
        if not res:
            return fd, EPSILON
        P = decode(res.model, da.machine, vm)
        run = find_accepted_comb(build_da(da.spec, P))
        if run is None:
            stats.conforming_excluded += 1
            fd = fd & encode_exclude(P, vm)
            continue
        stats.log.append((P, run.test))
        return fd, run.test


@dataclass
class GenerationResult:
    suite: TestSuite
    trivially_complete: bool
    stats: EngineStats

    def __iter__(self):
        return iter(self.suite)

    def __len__(self):
        return len(self.suite)


def generate_complete_suite(
    E_init, fm: FaultModel, solver=None, drop_prefixes: bool = False
) -> GenerationResult:
    """Extend ``E_init`` one test at a time until no nonconforming mutant survives."""
    t0 = time.perf_counter()
    suite = TestSuite(as_sequence(t) for t in E_init)
    stats = EngineStats()
    try:
        fd = fm.phi_m()
    except NoUntrustedTransitions:
        stats.seconds = time.perf_counter() - t0
        return GenerationResult(suite, True, stats)
    current = list(suite)
    while True:
        fd, alpha = verify_completeness(fd, current, fm.da, fm.varmap, solver, stats)
        if alpha is EPSILON:
            break
        if alpha in suite:  # cannot happen: its constraints are already in fd
            raise AssertionError(f"test {alpha} generated twice")
        suite.add(alpha)
        stats.tests_added += 1
        current = [alpha]
    if drop_prefixes:
        suite = suite.without_prefixes()
    stats.seconds = time.perf_counter() - t0
    return GenerationResult(suite, False, stats)


def check_suite(fm: FaultModel, E, solver=None):
    """Fresh verification of ``E`` from the fault-domain formula alone."""
    try:
        fd = fm.phi_m()
    except NoUntrustedTransitions:
        return EPSILON
    return verify_completeness(fd, list(E), fm.da, fm.varmap, solver)[1]


__all__ = [
    "EPSILON",
    "EngineStats",
    "FaultModel",
    "GenerationResult",
    "TimedSequence",
    "check_suite",
    "generate_complete_suite",
    "not_phi_alpha",
    "verify_completeness",
]
