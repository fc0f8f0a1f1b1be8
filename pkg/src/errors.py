"""
Exception hierarchy shared by the library and the command-line front end.

Every exception carries the process exit code the CLI uses when it reaches
the top level.
"""
from typing import Optional, Sequence


def describe_report(report, labels: Optional[Sequence[str]] = None) -> str:
    """One-line summary of an ErgodicityReport, with state labels when given."""
    data = report.to_dict(tuple(labels) if labels is not None else None)
    top = ', '.join(str(x) for x in data['top_class'])
    if not data['regular']:
        return "no state is upper reachable from every state"
    if not data['absorbing']:
        return f"top class {{{top}}}, not absorbing"
    return f"top class {{{top}}}, ergodic"


class IctmcError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 4


class ContractViolationError(IctmcError, ValueError):
    """An argument breaks the documented contract of an operation."""


class StepTooLargeError(ContractViolationError):
    """A step size makes (I + delta Q) leave the lower transition operators."""

    def __init__(self, delta: float, norm: float):
        self.delta = delta
        self.norm = norm
        self.bound = 2.0 / norm if norm > 0 else float('inf')
        super().__init__(
            f"Step size {delta!r} too large: delta * ||Q|| = {delta * norm!r} > 2 "
            f"(||Q|| = {norm!r}, largest admissible step 2/||Q|| = {self.bound!r})"
        )


class SizeLimitError(ContractViolationError):
    """A brute-force computation was requested on a state space that is too large."""

    def __init__(self, what: str, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"{what} supports at most {limit} states, got {size}")


class InapplicableError(IctmcError):
    """The requested bound or method is vacuous for this input."""


class NotErgodicError(InapplicableError):
    """A method that needs an ergodic lower transition rate operator got another one."""

    def __init__(self, report, message: Optional[str] = None, labels: Optional[Sequence[str]] = None):
        self.report = report
        message = message or f"Lower transition rate operator is not ergodic: {describe_report(report, labels)}"
        super().__init__(message)


class ModelParseError(IctmcError, ValueError):
    """A model or query file could not be read or is not valid JSON."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ''
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class ModelValidationError(ModelParseError):
    """A model or query parsed but its content is invalid."""

    exit_code = 3


class ConfigurationError(IctmcError, ValueError):
    """An environment setting has an invalid value."""

    exit_code = 3
