"""Error codes for the CTOA lab."""

from enum import Enum


class ErrorCode(str, Enum):
    """Machine-readable error codes shared by the CLI and the HTTP API."""

    # Validation errors (usage)
    INVALID_CONFIG = "INVALID_CONFIG"
    UNSUPPORTED_ORDER = "UNSUPPORTED_ORDER"
    DOMAIN_ERROR = "DOMAIN_ERROR"
    NULL_MODE = "NULL_MODE"
    REPRESENTATION_MISMATCH = "REPRESENTATION_MISMATCH"

    # Lookup errors (usage)
    UNKNOWN_FIGURE = "UNKNOWN_FIGURE"
    UNKNOWN_SUITE = "UNKNOWN_SUITE"

    # Numerical failures (computation)
    NOT_HERMITIAN = "NOT_HERMITIAN"
    ROOTS_NOT_FOUND = "ROOTS_NOT_FOUND"
    EIGENSOLVER_FAILURE = "EIGENSOLVER_FAILURE"
    ZERO_NORM = "ZERO_NORM"
    NOT_NORMALIZED = "NOT_NORMALIZED"
    AMBIGUOUS_CLASSIFICATION = "AMBIGUOUS_CLASSIFICATION"
    WINDOW_TOO_SMALL = "WINDOW_TOO_SMALL"
    NO_CROSSING = "NO_CROSSING"
    INSUFFICIENT_DATA = "INSUFFICIENT_DATA"

    # Internal errors
    INTERNAL_ERROR = "INTERNAL_ERROR"
    FILE_SYSTEM_ERROR = "FILE_SYSTEM_ERROR"
