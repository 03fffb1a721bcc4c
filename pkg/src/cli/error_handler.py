"""Error handling utilities for the command-line front end."""

import sys

from src.core.error_codes import ErrorCode
from src.core.exceptions import LabError
from src.logger import get_logger

logger = get_logger(__name__)

EXIT_OK: int = 0
EXIT_FAILURE: int = 1
EXIT_USAGE: int = 2

# Codes not listed here are computational failures
USAGE_CODES: frozenset[ErrorCode] = frozenset(
    {
        ErrorCode.INVALID_CONFIG,
        ErrorCode.UNSUPPORTED_ORDER,
        ErrorCode.DOMAIN_ERROR,
        ErrorCode.NULL_MODE,
        ErrorCode.REPRESENTATION_MISMATCH,
        ErrorCode.UNKNOWN_FIGURE,
        ErrorCode.UNKNOWN_SUITE,
    }
)


def exit_code_for(error_code: ErrorCode) -> int:
    """Process exit status for an error code."""
    return EXIT_USAGE if error_code in USAGE_CODES else EXIT_FAILURE


def handle_lab_error(error: LabError) -> int:
    """
    Print a one-line diagnostic to standard error and pick the exit status.

    Args:
        error: LabError instance

    Returns:
        1 for computational failures, 2 for usage errors
    """
    code: int = exit_code_for(error.error_code)
    logger.warning("Command failed", error_code=error.error_code.value, exit_code=code)
    print(f"error [{error.error_code.value}]: {error.message}", file=sys.stderr)
    return code
