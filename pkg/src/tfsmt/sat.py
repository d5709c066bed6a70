"""SAT solving: an internal CDCL solver and an external DIMACS process.

The internal solver branches on the lowest unassigned variable, trying
``False`` first, learns first-UIP clauses and never restarts, so results
are reproducible run to run.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import kernels
from .encoding import CnfFormula
from .errors import ExternalSolverFailure


@dataclass(frozen=True)
class SolveResult:
    sat: bool
    model: dict | None = None  # variable -> bool, total over 1..num_vars

    def __bool__(self):
        return self.sat


UNSAT = SolveResult(False)


def _check_model(clauses, model) -> None:
    for c in clauses:
        if not any(model[abs(x)] == (x > 0) for x in c):
            raise AssertionError(f"solver returned a model violating clause {c}")


class CdclSolver:
    """Conflict-driven clause learning with two watched literals.

    Runs the compiled array kernel when numba is active and the list-based
    Python search otherwise (or with ``jit=False``).
    """

    def __init__(self, jit: bool | None = None):
        self.jit = kernels.JIT_ENABLED if jit is None else (jit and kernels.JIT_ENABLED)

    def solve(self, formula: CnfFormula, num_vars: int | None = None) -> SolveResult:
        n = max(formula.num_vars, num_vars or 0)
        if self.jit:
            codes, starts, lens = formula.arrays()
            sat, values = kernels.cdcl_arrays(n, codes, starts, lens, jit=True)
            if not sat:
                return UNSAT
            if not kernels.clauses_satisfied(codes, starts, lens, values):
                raise AssertionError("solver returned a model violating the formula")
            return SolveResult(True, {v: bool(values[v]) for v in range(1, n + 1)})
        model = _cdcl(n, [list(c) for c in formula.clauses])
        if model is None:
            return UNSAT
        _check_model(formula.clauses, model)
        return SolveResult(True, model)


def _cdcl(n: int, clauses: list[list[int]]):
    # literal x maps to index 2*v + (x < 0)
    value = [0] * (n + 1)  # 1 true, -1 false, 0 free
    level = [0] * (n + 1)
    reason: list = [None] * (n + 1)
    watches: list[list[list[int]]] = [[] for _ in range(2 * n + 2)]
    trail: list[int] = []
    lim: list[int] = []

    def idx(x):
        return 2 * x if x > 0 else -2 * x + 1

    def val(x):
        v = value[abs(x)]
        return v if x > 0 else -v

    def assign(x, why):
        v = abs(x)
        value[v] = 1 if x > 0 else -1
        level[v] = len(lim)
        reason[v] = why
        trail.append(x)

    units = []
    for c in clauses:
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
        else:
            watches[idx(-c[0])].append(c)
            watches[idx(-c[1])].append(c)
    for x in units:
        if val(x) == -1:
            return None
        if val(x) == 0:
            assign(x, None)

    qhead = 0

    def propagate():
        nonlocal qhead
        while qhead < len(trail):
            x = trail[qhead]
            qhead += 1
            ws = watches[idx(x)]  # clauses watching -x, which just became false
            i = 0
            while i < len(ws):
                c = ws[i]
                false_lit = -x
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if val(c[0]) == 1:
                    i += 1
                    continue
                for k in range(2, len(c)):
                    if val(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        watches[idx(-c[1])].append(c)
                        ws[i] = ws[-1]
                        ws.pop()
                        break
                else:
                    if val(c[0]) == -1:
                        return c
                    assign(c[0], c)
                    i += 1
        return None

    def analyze(conflict):
        seen = [False] * (n + 1)
        learnt = [0]
        counter = 0
        p = None
        k = len(trail) - 1
        c = conflict
        cur = len(lim)
        while True:
            for y in c:
                if p is not None and y == p:
                    continue
                v = abs(y)
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    if level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(y)
            while not seen[abs(trail[k])]:
                k -= 1
            p = trail[k]
            k -= 1
            c = reason[abs(p)]
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        if len(learnt) == 1:
            back = 0
        else:
            j = max(range(1, len(learnt)), key=lambda q: level[abs(learnt[q])])
            learnt[1], learnt[j] = learnt[j], learnt[1]
            back = level[abs(learnt[1])]
        return learnt, back

    def backtrack(to_level):
        nonlocal qhead
        if len(lim) <= to_level:
            return
        start = lim[to_level]
        for x in trail[start:]:
            v = abs(x)
            value[v] = 0
            reason[v] = None
        del trail[start:]
        del lim[to_level:]
        qhead = len(trail)

    next_var = 1
    while True:
        conflict = propagate()
        if conflict is not None:
            if not lim:
                return None
            learnt, back = analyze(conflict)
            backtrack(back)
            if len(learnt) == 1:
                assign(learnt[0], None)
            else:
                watches[idx(-learnt[0])].append(learnt)
                watches[idx(-learnt[1])].append(learnt)
                assign(learnt[0], learnt)
            next_var = 1
            continue
        while next_var <= n and value[next_var] != 0:
            next_var += 1
        if next_var > n:
            return {v: value[v] == 1 for v in range(1, n + 1)}
        lim.append(len(trail))
        assign(-next_var, None)


class ExternalSolver:
    """Runs ``<path> <file.cnf>`` and parses ``s``/``v`` lines of its output."""

    def __init__(self, path: str, args: Sequence[str] = (), timeout: float | None = None):
        self.path = path
        self.args = list(args)
        self.timeout = timeout

    def solve(self, formula: CnfFormula, num_vars: int | None = None) -> SolveResult:
        import tempfile

        n = max(formula.num_vars, num_vars or 0)
        f = CnfFormula(num_vars=n)
        f.clauses = formula.clauses
        with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=True) as fh:
            fh.write(f.to_dimacs())
            fh.flush()
            try:
                proc = subprocess.run(
                    [self.path, *self.args, fh.name],
                    capture_output=True,
                    text=True,
                    timeout=self.timeout,
                )
            except (OSError, subprocess.TimeoutExpired) as exc:
                raise ExternalSolverFailure(f"could not run {self.path}: {exc}") from None
        # SAT competition convention: exit 10 = SAT, 20 = UNSAT
        if proc.returncode not in (0, 10, 20):
            raise ExternalSolverFailure(f"{self.path} exited with status {proc.returncode}")
        status = None
        lits: list[int] = []
        for line in proc.stdout.splitlines():
            if line.startswith("s "):
                status = line[2:].strip()
            elif line.startswith("v "):
                try:
                    lits.extend(int(tok) for tok in line[2:].split())
                except ValueError:
                    raise ExternalSolverFailure(f"bad value line {line!r}") from None
        if status == "UNSATISFIABLE":
            return UNSAT
        if status != "SATISFIABLE":
            raise ExternalSolverFailure(f"{self.path} printed no satisfiability status")
        model = {v: False for v in range(1, n + 1)}
        for x in lits:
            if x != 0 and abs(x) <= n:
                model[abs(x)] = x > 0
        try:
            _check_model(formula.clauses, model)
        except AssertionError as exc:
            raise ExternalSolverFailure(str(exc)) from None
        return SolveResult(True, model)


def make_solver(spec: str | None = None):
    """``"internal"`` (default) or ``"external:<path>"``."""
    if spec is None or spec == "internal":
        return CdclSolver()
    if spec.startswith("external:"):
        path = spec[len("external:"):]
        if not path:
            raise ValueError("external solver needs a path: external:<path>")
        return ExternalSolver(path)
    raise ValueError(f"unknown solver {spec!r}; use internal or external:<path>")


def solve(formula: CnfFormula, num_vars: int | None = None, solver=None) -> SolveResult:
    return (solver or CdclSolver()).solve(formula, num_vars)


def enumerate_models(
    formula: CnfFormula, num_vars: int | None = None, limit: int = 10**6, solver=None, project=None
) -> Iterator[dict]:
    """Distinct models, blocked one at a time, up to ``limit``.

    With ``project`` (an iterable of variables) models are distinct on those
    variables only, and only those variables are blocked.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    solver = solver or CdclSolver()
    n = max(formula.num_vars, num_vars or 0)
    work = CnfFormula(num_vars=n)
    work.clauses = list(formula.clauses)
    work._flat = formula._flat
    keys = sorted(project) if project is not None else list(range(1, n + 1))
    for _ in range(limit):
        res = solver.solve(work, n)
        if not res:
            return
        yield res.model
        block = [(-v if res.model[v] else v) for v in keys]
        if not block:
            return
        work.add(block)


def brute_force_sat(formula: CnfFormula, num_vars: int | None = None) -> bool:
    """Truth-table satisfiability; only for small variable counts."""
    return kernels.count_models(formula, num_vars, stop_at_first=True) > 0
