"""Command line interface.

Exit status: 0 on success (or a complete suite), 1 when a suite is
incomplete or a counterexample exists, 2 on any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .distinguishing import build_da, revealing_combs
from .encoding import encode_not_phi_alpha
from .engine import EPSILON, FaultModel, generate_complete_suite, verify_completeness
from .errors import NoUntrustedTransitions, TfsmError
from .formats import export_dot, parse_machine, parse_suite, print_machine, print_suite
from .generator import random_fault_model
from .machine import validate
from .models import BUNDLED, bundled_text
from .oracle import DEFAULT_BOUND, oracle_check_suite
from .sat import make_solver
from .timed import TimedSequence, simulate

OK, INCOMPLETE, ERROR = 0, 1, 2


def _read(path: str) -> str:
    if path.startswith("bundled:"):
        return bundled_text(path[len("bundled:"):])
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _machine(args, check=True):
    return parse_machine(_read(args.machine), check=check)


def _selection(machine, spec: str):
    if spec == "spec":
        return machine.spec
    if spec.startswith("mutant:"):
        ids = [x for x in spec[len("mutant:"):].split(",") if x]
        return machine.mutant(*ids)
    raise ValueError(f"--as expects 'spec' or 'mutant:<id>,<id>...', got {spec!r}")


def cmd_validate(args) -> int:
    machine = _machine(args, check=False)
    diags = validate(machine)
    for d in diags:
        print(d)
    if diags:
        return ERROR
    print(f"{machine.name}: valid ({len(machine.states)} states, {len(machine.transitions)} transitions)")
    return OK


def cmd_count(args) -> int:
    machine = _machine(args)
    klass = machine.classify()
    print(f"mutants: {machine.count_mutants()}")
    if args.verbose:
        print(f"trusted: {len(klass.trusted)}  untrusted: {len(klass.untrusted)}  mutated: {len(klass.mutated)}")
    return OK


def cmd_simulate(args) -> int:
    machine = _machine(args)
    sel = _selection(machine, args.as_)
    test = TimedSequence.parse(args.test)
    out = simulate(sel, test)
    print(str(out) if len(out) else "ε")
    return OK


def cmd_revcombs(args) -> int:
    machine = _machine(args)
    da = build_da(machine.spec, machine)
    combs = sorted(revealing_combs(da, TimedSequence.parse(args.test)), key=lambda c: c.transitions)
    for c in combs:
        print(c)
    print(f"# {len(combs)} revealing combs", file=sys.stderr)
    return OK


def cmd_verify(args) -> int:
    machine = _machine(args)
    suite = parse_suite(_read(args.tests), machine)
    fm = FaultModel(machine)
    try:
        fd = fm.phi_m()
    except NoUntrustedTransitions:
        print("complete (empty fault domain)")
        return OK
    _, alpha = verify_completeness(fd, list(suite), fm.da, fm.varmap, make_solver(args.sat))
    if alpha is EPSILON:
        print("complete")
        return OK
    print(f"incomplete: {alpha}")
    return INCOMPLETE


def cmd_generate(args) -> int:
    machine = _machine(args)
    init = parse_suite(_read(args.init_tests), machine) if args.init_tests else []
    res = generate_complete_suite(init, FaultModel(machine), make_solver(args.sat), args.drop_prefixes)
    _write(args.out, print_suite(res.suite))
    note = " (empty fault domain)" if res.trivially_complete else ""
    print(
        f"# {len(res.suite)} tests, max length {max((len(t) for t in res.suite), default=0)}, "
        f"{res.stats.solver_calls} solver calls, {res.stats.seconds:.2f}s{note}",
        file=sys.stderr,
    )
    return OK


def cmd_oracle_check(args) -> int:
    machine = _machine(args)
    suite = parse_suite(_read(args.tests), machine)
    v = oracle_check_suite(FaultModel(machine), suite, bound=args.bound)
    print(f"mutants: {v.mutants}  nonconforming: {v.nonconforming}  undetected: {v.undetected}")
    if v.complete:
        print("complete")
        return OK
    print("counterexample: " + " ".join(t.id for t in v.counterexample.transitions))
    return INCOMPLETE


def cmd_random(args) -> int:
    machine = random_fault_model(
        args.states, args.inputs, args.outputs, args.max_spec_timeout, args.max_mut_timeout,
        args.degree, args.seed,
    )
    _write(args.out, print_machine(machine))
    print(f"# {machine.count_mutants()} mutants", file=sys.stderr)
    return OK


def cmd_dot(args) -> int:
    machine = _machine(args)
    if args.da:
        mut = _selection(machine, args.mutant) if args.mutant else machine
        _write(args.out, export_dot(build_da(machine.spec, mut)))
    else:
        _write(args.out, export_dot(machine))
    return OK


def cmd_cnf(args) -> int:
    machine = _machine(args)
    fm = FaultModel(machine)
    f = fm.phi_m()
    if args.tests:
        for t in parse_suite(_read(args.tests), machine):
            f = f & encode_not_phi_alpha(revealing_combs(fm.da, t), fm.varmap)
    _write(args.out, f.to_dimacs(fm.varmap))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tfsmt",
        description="Complete test suites for timed FSMs with timeouts. "
        f"Machines are file paths or bundled:<name> ({', '.join(BUNDLED)}).",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--sat", default="internal", help="internal (default) or external:<path>")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_, machine=True):
        sp = sub.add_parser(name, help=help_)
        if machine:
            sp.add_argument("--machine", "-m", required=True)
        sp.set_defaults(func=fn)
        return sp

    cmd("validate", cmd_validate, "check a machine file")
    sp = cmd("count", cmd_count, "count mutants")
    sp.add_argument("--verbose", "-v", action="store_true")
    sp = cmd("simulate", cmd_simulate, "timed output sequence of the reference machine or a mutant")
    sp.add_argument("--test", "-t", required=True)
    sp.add_argument("--as", dest="as_", default="spec", help="spec or mutant:<id>,<id>...")
    sp = cmd("revcombs", cmd_revcombs, "revealing combs of a test")
    sp.add_argument("--test", "-t", required=True)
    sp = cmd("verify", cmd_verify, "check a suite for completeness with the SAT encoding")
    sp.add_argument("--tests", required=True)
    sp = cmd("generate", cmd_generate, "generate a complete suite")
    sp.add_argument("--init-tests")
    sp.add_argument("--drop-prefixes", action="store_true")
    sp.add_argument("--out", "-o")
    sp = cmd("oracle-check", cmd_oracle_check, "check a suite by enumerating mutants")
    sp.add_argument("--tests", required=True)
    sp.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sp = cmd("random", cmd_random, "random fault model", machine=False)
    sp.add_argument("--states", type=int, default=4)
    sp.add_argument("--inputs", type=int, default=2)
    sp.add_argument("--outputs", type=int, default=2)
    sp.add_argument("--max-spec-timeout", type=int, default=3)
    sp.add_argument("--max-mut-timeout", type=int, default=5)
    sp.add_argument("--degree", type=float, default=4)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", "-o")
    sp = cmd("dot", cmd_dot, "Graphviz rendering of a machine or its distinguishing automaton")
    sp.add_argument("--da", action="store_true")
    sp.add_argument("--mutant", help="with --da: pair the reference machine with mutant:<ids> instead of the whole machine")
    sp.add_argument("--out", "-o")
    sp = cmd("cnf", cmd_cnf, "fault-domain formula (and suite constraints) in DIMACS")
    sp.add_argument("--tests")
    sp.add_argument("--out", "-o")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        make_solver(args.sat)
        return args.func(args)
    except (TfsmError, OSError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
