"""Boolean encodings over suspicious-transition variables.

Trusted transitions get no variable: they belong to every submachine, so
the unit clauses and always-false disjuncts mentioning them are dropped.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import EmptySuspiciousSet, NoUntrustedTransitions
from .machine import MutationMachine, Submachine


class VarMap:
    """Bijection between suspicious transition ids and variables ``1..n``."""

    def __init__(self, machine: MutationMachine):
        klass = machine.classify()
        ordered = [t.id for t in machine.transitions if t.id in klass.suspicious]
        self.machine = machine
        self.var = {tid: k for k, tid in enumerate(ordered, start=1)}
        self.tid = {k: tid for tid, k in self.var.items()}

    def __len__(self):
        return len(self.var)

    def __contains__(self, tid):
        return tid in self.var

    def __getitem__(self, tid) -> int:
        return self.var[tid]

    def lit(self, tid: str, positive: bool = True) -> int:
        v = self.var[tid]
        return v if positive else -v


class CnfFormula:
    """Clause list over variables ``1..num_vars``; clauses are tuples of signed ints."""

    def __init__(self, clauses: Iterable = (), num_vars: int = 0):
        self.clauses: list[tuple[int, ...]] = []
        self.num_vars = num_vars
        self._flat = None  # (clause count, codes, starts, lens) for a prefix of clauses
        for c in clauses:
            self.add(c)

    def add(self, clause) -> None:
        lits = tuple(sorted(set(clause), key=lambda x: (abs(x), x)))
        for x in lits:
            if -x in lits:
                raise ValueError(f"clause contains both {x} and {-x}")
        if lits:
            self.num_vars = max(self.num_vars, max(abs(x) for x in lits))
        self.clauses.append(lits)

    def __and__(self, other: "CnfFormula") -> "CnfFormula":
        out = CnfFormula(num_vars=max(self.num_vars, other.num_vars))
        out.clauses = self.clauses + other.clauses
        out._flat = self._flat
        return out

    def arrays(self):
        """Literal codes, clause starts and lengths (see :func:`kernels.cnf_arrays`)."""
        from .kernels import cnf_arrays

        done, codes, starts, lens = self._flat or (0, None, None, None)
        if codes is None or done != len(self.clauses):
            c2, s2, l2 = cnf_arrays(self.clauses[done:])
            if codes is None:
                codes, starts, lens = c2, s2, l2
            else:
                starts = np.concatenate([starts, s2 + len(codes)])
                codes = np.concatenate([codes, c2])
                lens = np.concatenate([lens, l2])
            self._flat = (len(self.clauses), codes, starts, lens)
        return codes, starts, lens

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __repr__(self):
        return f"CnfFormula(vars={self.num_vars}, clauses={len(self.clauses)})"

    def clause_set(self) -> set:
        return {frozenset(c) for c in self.clauses}

    def evaluate(self, model: Mapping[int, bool]) -> bool:
        return all(any(model[abs(x)] == (x > 0) for x in c) for c in self.clauses)

    def to_dimacs(self, vm: VarMap | None = None) -> str:
        lines = []
        if vm is not None:
            lines.append(f"c {vm.machine.name}: variable -> transition")
            for v in sorted(vm.tid):
                lines.append(f"c {v} {vm.tid[v]}")
        lines.append(f"p cnf {self.num_vars} {len(self.clauses)}")
        lines.extend(" ".join(map(str, c)) + " 0" for c in self.clauses)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "CnfFormula":
        f = cls()
        declared = 0
        pending: list[int] = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                declared = int(line.split()[2])
                continue
            for tok in line.split():
                x = int(tok)
                if x == 0:
                    f.add(pending)
                    pending = []
                else:
                    pending.append(x)
        f.num_vars = max(f.num_vars, declared)
        return f


def encode_not_phi_alpha(revs: Iterable, vm: VarMap) -> CnfFormula:
    """One clause per revealing comb: the comb cannot be entirely present."""
    f = CnfFormula(num_vars=len(vm))
    for comb in sorted(revs, key=lambda c: c.transitions):
        if not comb.suspicious:
            raise EmptySuspiciousSet(f"revealing comb {comb} has no suspicious transition")
        f.add(-vm[t] for t in comb.suspicious)
    return f


def encode_exactly_one(group: Iterable[str], vm: VarMap) -> CnfFormula:
    members = [t for t in group if t in vm]
    f = CnfFormula(num_vars=len(vm))
    if not members:
        return f
    for a, b in combinations(members, 2):
        f.add((-vm[a], -vm[b]))
    f.add(vm[t] for t in members)
    return f


def encode_phi_m(machine: MutationMachine, vm: VarMap) -> CnfFormula:
    """Exactly one transition per group, and at least one untrusted spec transition rejected."""
    klass = machine.classify()
    if not klass.untrusted:
        raise NoUntrustedTransitions(f"{machine.name} defines no mutant")
    f = CnfFormula(num_vars=len(vm))
    for group in machine.groups():
        f = f & encode_exactly_one((t.id for t in group), vm)
    f.add(-vm[t.id] for t in machine.transitions if t.id in klass.untrusted)
    return f


def encode_exclude(selection: Submachine, vm: VarMap) -> CnfFormula:
    """Forbid every submachine containing all suspicious transitions of ``selection``."""
    susp = [t for t in selection.chosen if t in vm]
    f = CnfFormula(num_vars=len(vm))
    f.add(-vm[t] for t in susp)
    return f


def decode(model: Mapping[int, bool], machine: MutationMachine, vm: VarMap) -> Submachine:
    """Submachine of the trusted transitions plus the suspicious ones set true, connected part only."""
    klass = machine.classify()
    chosen = set(klass.trusted)
    chosen.update(tid for tid, v in vm.var.items() if model.get(v, False))
    return Submachine(machine, frozenset(chosen)).extract()


def as_model(selection: Submachine, vm: VarMap) -> dict[int, bool]:
    return {v: tid in selection.chosen for tid, v in vm.var.items()}
