"""Exceptions and exit codes for segkit."""

from __future__ import annotations

from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes used by the CLI."""

    OK = 0
    USAGE = 1
    INPUT = 2
    CONTRACT = 3


class SegkitError(Exception):
    """Base class for every error raised by segkit."""

    kind = "internal"
    exit_code = ExitCode.CONTRACT


class UsageError(SegkitError):
    """Invalid option combination or a request the tool refuses to run."""

    kind = "usage"
    exit_code = ExitCode.USAGE


class InputError(SegkitError):
    """Unreadable, malformed or non-finite input data."""

    kind = "input"
    exit_code = ExitCode.INPUT


class ContractViolation(SegkitError, ValueError):
    """A precondition or internal invariant does not hold."""

    kind = "contract"


class UnsupportedOperation(SegkitError):
    """The requested operation is not available for this object."""

    kind = "unsupported"


class EnumerationBudgetExceeded(SegkitError):
    """Exhaustive enumeration would exceed the configured budget."""

    kind = "budget"


class InfeasibleError(SegkitError):
    """No segmentation satisfies the requested threshold."""

    kind = "infeasible"
