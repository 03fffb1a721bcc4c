"""Deterministic CSV rendering for command output."""

import csv
import io
import os
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

from src.core.config import SystemConfig
from src.core.error_codes import ErrorCode
from src.core.exceptions import LabError
from src.logger import get_logger

logger = get_logger(__name__)

SIGNIFICANT_DIGITS: int = 12


def format_value(value: Any) -> str:
    """Render one cell; floats keep 12 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value == 0.0:
            return "0"
        return f"{value:.{SIGNIFICANT_DIGITS}g}"
    if hasattr(value, "value"):
        return str(value.value)
    if value is None:
        return ""
    return str(value)


def metadata_line(config: SystemConfig, columns: Sequence[str], extra: Mapping[str, Any] | None = None) -> str:
    """
    One-line ``#`` header echoing the config, extra tags and the column names.

    Keys keep a fixed order so repeated runs are byte-identical.
    """
    fields: dict[str, Any] = dict(config.model_dump())
    fields.update(extra or {})
    echo: str = " ".join(f"{key}={format_value(value)}" for key, value in fields.items())
    return f"# {echo} columns={','.join(columns)}"


def render_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: SystemConfig,
    extra: Mapping[str, Any] | None = None,
) -> str:
    """
    Render metadata line, header and rows.

    Args:
        columns: Column names
        rows: Row values in column order
        config: Config echoed into the metadata line
        extra: Additional metadata tags (tau, parity, ...)

    Returns:
        CSV text with '\\n' line endings
    """
    buffer = io.StringIO()
    buffer.write(metadata_line(config, columns, extra) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def write_text(text: str, out: Path | None) -> None:
    """
    Write to ``out`` through a temporary file, or to standard output.

    Raises:
        LabError: FILE_SYSTEM_ERROR if the target cannot be written
    """
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return

    tmp_path: Path = out.with_name(out.name + ".tmp")
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        tmp_path.write_text(text, encoding="utf-8", newline="")
        os.replace(tmp_path, out)
    except OSError as e:
        logger.error("Failed to write output", path=str(out), error=str(e))
        raise LabError(
            ErrorCode.FILE_SYSTEM_ERROR,
            f"cannot write '{out}': {e}",
            {"path": str(out)},
        ) from e
    logger.info("Output written", path=str(out), size=len(text))


def write_csv(
    columns: Sequence[str],
    rows: Iterable[Sequence[Any]],
    config: SystemConfig,
    out: Path | None = None,
    extra: Mapping[str, Any] | None = None,
) -> None:
    """render_csv followed by write_text."""
    write_text(render_csv(columns, rows, config, extra), out)
