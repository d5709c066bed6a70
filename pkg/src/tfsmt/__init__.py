"""Fault detection for timed FSMs with timeouts by constraint solving.

A mutation machine embeds a deterministic reference machine and compactly
describes a fault domain of mutants.  This package checks whether a suite of
timed input sequences detects every nonconforming mutant and extends a suite
until it does, using a distinguishing automaton and SAT encodings.
"""

__version__ = "0.1.0"

from .distinguishing import (
    SINK,
    Comb,
    DistAutomaton,
    build_da,
    find_accepted_comb,
    revealing_combs,
    test_of_comb,
)
from .encoding import (
    CnfFormula,
    VarMap,
    decode,
    encode_exactly_one,
    encode_exclude,
    encode_not_phi_alpha,
    encode_phi_m,
)
from .engine import EPSILON, FaultModel, check_suite, generate_complete_suite, verify_completeness
from .errors import (
    DomainTooLarge,
    EmptySuspiciousSet,
    ExternalSolverFailure,
    InvalidComb,
    MachineError,
    MalformedTest,
    NondeterministicMachine,
    NoUntrustedTransitions,
    ParseError,
    TfsmError,
)
from .formats import TestSuite, export_dot, parse_machine, parse_suite, print_machine, print_suite
from .generator import random_fault_model
from .machine import (
    INF,
    MutationMachine,
    Submachine,
    Transition,
    TransitionClassification,
    classify,
    count_mutants,
    extract_submachine,
    validate,
)
from .models import load_bundled, m1
from .oracle import conforms, enumerate_mutants, oracle_check_suite
from .sat import CdclSolver, ExternalSolver, SolveResult, enumerate_models, solve
from .timed import TimedSequence, detects, replay, simulate
