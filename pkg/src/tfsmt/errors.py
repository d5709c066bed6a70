"""Exception types shared across the package."""


class TfsmError(Exception):
    """Base class for all errors raised by tfsmt."""


class MachineError(TfsmError):
    """A machine description is structurally unusable (unknown names, duplicate ids)."""


class NondeterministicMachine(TfsmError):
    """Simulation was asked to run a selection that is not deterministic and complete."""


class MalformedTest(TfsmError):
    """A timed input sequence has decreasing delays or unknown symbols."""


class InvalidComb(TfsmError):
    """A transition sequence does not describe an execution for the given test."""


class EmptySuspiciousSet(TfsmError):
    """A revealing comb without suspicious transitions; the reference machine itself would be detected."""


class NoUntrustedTransitions(TfsmError):
    """The mutation machine defines no mutant: the fault domain is empty."""


class DomainTooLarge(TfsmError):
    """Brute-force enumeration was requested on a fault domain above the bound."""


class ExternalSolverFailure(TfsmError):
    """The external SAT solver exited abnormally or produced unparsable output."""


class ParseError(TfsmError):
    """Syntax or validation error in a machine or test-suite file."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
