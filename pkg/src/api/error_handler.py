"""Error handling utilities for the HTTP API."""

from fastapi import HTTPException, status

from src.api.schemas import ErrorResponse
from src.core.error_codes import ErrorCode
from src.core.exceptions import LabError
from src.logger import get_logger

logger = get_logger(__name__)


def create_error_response(
    error_code: ErrorCode,
    message: str,
    status_code: int = status.HTTP_400_BAD_REQUEST,
    details: dict[str, str] | None = None,
) -> HTTPException:
    """
    Create HTTPException with error code and message.

    Args:
        error_code: Error code
        message: Error message
        status_code: HTTP status code
        details: Additional error details

    Returns:
        HTTPException with error response
    """
    error_response = ErrorResponse(
        error_code=error_code.value,
        message=message,
        details=details,
    )
    return HTTPException(
        status_code=status_code,
        detail=error_response.model_dump(),
    )


def handle_lab_error(error: LabError) -> HTTPException:
    """
    Convert LabError to HTTPException.

    Usage errors map to 400/404, numerical failures to 422.
    """
    status_code_map: dict[ErrorCode, int] = {
        ErrorCode.INVALID_CONFIG: status.HTTP_400_BAD_REQUEST,
        ErrorCode.UNSUPPORTED_ORDER: status.HTTP_400_BAD_REQUEST,
        ErrorCode.DOMAIN_ERROR: status.HTTP_400_BAD_REQUEST,
        ErrorCode.NULL_MODE: status.HTTP_400_BAD_REQUEST,
        ErrorCode.REPRESENTATION_MISMATCH: status.HTTP_400_BAD_REQUEST,
        ErrorCode.UNKNOWN_FIGURE: status.HTTP_404_NOT_FOUND,
        ErrorCode.UNKNOWN_SUITE: status.HTTP_404_NOT_FOUND,
        ErrorCode.INTERNAL_ERROR: status.HTTP_500_INTERNAL_SERVER_ERROR,
        ErrorCode.FILE_SYSTEM_ERROR: status.HTTP_500_INTERNAL_SERVER_ERROR,
    }
    status_code: int = status_code_map.get(error.error_code, status.HTTP_422_UNPROCESSABLE_ENTITY)
    return create_error_response(
        error_code=error.error_code,
        message=error.message,
        status_code=status_code,
        details=error.details,
    )


def handle_error(error: Exception, context: str = "") -> HTTPException:
    """Convert any exception raised by an endpoint to an HTTPException."""
    if isinstance(error, LabError):
        logger.warning("Lab error", context=context, error=str(error), error_code=error.error_code.value)
        return handle_lab_error(error)

    logger.error("Unexpected error", context=context, error=str(error), exc_info=True)
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail={
            "error_code": ErrorCode.INTERNAL_ERROR.value,
            "message": "An unexpected error occurred",
        },
    )
