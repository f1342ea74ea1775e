"""Utility functions for segkit."""

from __future__ import annotations

import json
import logging
import sys
import time
from typing import TYPE_CHECKING

from segkit.errors import ExitCode, SegkitError

if TYPE_CHECKING:
    from typing import NoReturn


def die(msg: str, *, code: ExitCode = ExitCode.USAGE, kind: str = "usage") -> NoReturn:
    """Exit with a machine-readable error object on stderr.

    Args:
        msg: Error message to display
        code: Process exit code
        kind: Error category, e.g. "usage", "input", "contract"

    Raises:
        SystemExit: Always
    """
    print(json.dumps({"error": kind, "message": msg}), file=sys.stderr)
    raise SystemExit(int(code))


def fail(error: SegkitError) -> NoReturn:
    """Exit for a segkit error with its mapped exit code."""
    logging.debug("Failing with %s", type(error).__name__)
    die(str(error), code=error.exit_code, kind=error.kind)


def elapsed_ms(start: float) -> float:
    """Milliseconds since a time.perf_counter() reading."""
    return (time.perf_counter() - start) * 1000.0


def verbosity_to_log_level(verbosity: int) -> int:
    """Convert verbosity level to logging level.

    Verbosity scale:
      -2 or less: ERROR
      -1: WARNING (default)
       0: INFO
       1 or more: DEBUG

    Args:
        verbosity: Verbosity level

    Returns:
        Logging level constant
    """
    error_threshold = -2
    match verbosity:
        case v if v <= error_threshold:
            return logging.ERROR
        case -1:
            return logging.WARNING
        case 0:
            return logging.INFO
        case _:
            return logging.DEBUG
