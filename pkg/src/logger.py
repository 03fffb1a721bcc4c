"""Logger setup"""

import logging
import sys
from typing import Any

import numpy as np
import structlog

from src.config import settings


def _numpy_to_builtin(_logger: Any, _method: str, event_dict: dict[str, Any]) -> dict[str, Any]:
    """Replace numpy scalars and small arrays in log records by plain Python values."""
    for key, value in event_dict.items():
        if isinstance(value, np.generic):
            event_dict[key] = value.item()
        elif isinstance(value, np.ndarray):
            event_dict[key] = value.tolist() if value.size <= 16 else f"<array shape={value.shape}>"
    return event_dict


def configure_logging(log_level: str = settings.log_level) -> None:
    """Configure structlog on top of standard logging.

    Records go to standard error; standard output belongs to CSV and report
    text written by the command-line front end.

    Args:
        log_level (str, optional): The logging level to use. Defaults to the
            CTOA_LOG_LEVEL environment variable or "WARNING".

    Note:
        In development environment, logs are rendered to console with colors.
        In other environments, logs are rendered as JSON.
    """
    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=getattr(logging, log_level.upper()),
    )
    processors = [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt="iso"),
        _numpy_to_builtin,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]
    if settings.environment == "development":
        processors.append(structlog.dev.ConsoleRenderer())
    else:
        processors.append(structlog.processors.JSONRenderer(ensure_ascii=False))
    structlog.configure(
        processors=processors,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def bind_run_context(**values: Any) -> None:
    """Attach values (command, suite, ...) to every record of the current run."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**values)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a configured logger instance for the specified name.

    Args:
        name (str): The name of the logger, typically __name__ of the module.

    Returns:
        structlog.stdlib.BoundLogger: A configured logger instance.
    """
    return structlog.get_logger(name)


configure_logging()
