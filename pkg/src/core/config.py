"""Physical configuration of the confined particle and numerical controls."""

import math
from pathlib import Path
from typing import Any

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.core.exceptions import ConfigError
from src.logger import get_logger

logger = get_logger(__name__)

MIN_BASIS_CUTOFF: int = 8
MIN_GRID_POINTS: int = 16

CONFIG_KEYS: tuple[str, ...] = (
    "length_l",
    "mass_mu",
    "hbar",
    "gamma",
    "basis_cutoff",
    "grid_points",
    "root_tolerance",
)

_GAMMA_TOKENS: dict[str, float] = {
    "pi/2": math.pi / 2,
    "-pi/2": -math.pi / 2,
    "0": 0.0,
}


def parse_gamma(value: Any) -> float:
    """
    Parse a boundary-condition phase.

    Accepts numbers, decimal literals and the tokens ``pi/2``, ``-pi/2`` and ``0``.

    Args:
        value: Raw value

    Returns:
        Phase in radians

    Raises:
        ValueError: If the value is not a number or known token
    """
    if isinstance(value, str):
        token: str = value.strip().lower().replace(" ", "")
        if token in _GAMMA_TOKENS:
            return _GAMMA_TOKENS[token]
        return float(token)
    return float(value)


class SystemConfig(BaseModel):
    """Physical parameters (l, mu, hbar, gamma) and numerical controls."""

    length_l: float = Field(default=1.0, gt=0, description="Half-width of the box [-l, l]")
    mass_mu: float = Field(default=1.0, gt=0, description="Particle mass")
    hbar: float = Field(default=1.0, gt=0, description="Reduced Planck constant")
    gamma: float = Field(default=0.01, description="Boundary-condition phase, |gamma| < pi")
    basis_cutoff: int = Field(
        default=512,
        ge=MIN_BASIS_CUTOFF,
        description="Momentum modes n in [-N, N]",
    )
    grid_points: int = Field(
        default=1024,
        ge=MIN_GRID_POINTS,
        description="Gauss-Legendre quadrature nodes",
    )
    root_tolerance: float = Field(
        default=1e-12,
        gt=0,
        description="Absolute tolerance of root refinement",
    )

    model_config = ConfigDict(frozen=True, extra="forbid")

    @field_validator("gamma", mode="before")
    @classmethod
    def _parse_gamma(cls, value: Any) -> float:
        return parse_gamma(value)

    @field_validator("gamma")
    @classmethod
    def _check_gamma(cls, value: float) -> float:
        if not math.isfinite(value) or abs(value) >= math.pi:
            raise ValueError("gamma must satisfy |gamma| < pi")
        return value

    @property
    def natural_units(self) -> bool:
        """True when hbar = l = mu = 1."""
        return self.length_l == 1.0 and self.mass_mu == 1.0 and self.hbar == 1.0

    @property
    def time_scale(self) -> float:
        """mu l^2 / (4 hbar): eigenvalues are this scale divided by a root."""
        return self.mass_mu * self.length_l**2 / (4.0 * self.hbar)

    def with_updates(self, **changes: Any) -> "SystemConfig":
        """
        Return a validated copy with some fields replaced.

        Args:
            **changes: Field values to replace

        Returns:
            New SystemConfig
        """
        return make_config({**self.model_dump(), **changes})


def make_config(
    raw: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
) -> SystemConfig:
    """
    Build a validated SystemConfig.

    Values in ``overrides`` (typically command-line flags) win over ``raw``
    (typically a config file); ``None`` override values are ignored.

    Args:
        raw: Raw parameter values
        overrides: Values taking precedence over ``raw``

    Returns:
        Validated SystemConfig with defaults for absent numerical controls

    Raises:
        ConfigError: If any value is invalid or an unknown key is supplied
    """
    merged: dict[str, Any] = dict(raw or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    try:
        return SystemConfig(**merged)
    except ValidationError as e:
        first = e.errors()[0]
        key: str = ".".join(str(part) for part in first.get("loc", ())) or "config"
        message: str = f"invalid value for '{key}': {first.get('msg', 'invalid')}"
        logger.warning("Config rejected", key=key, reason=first.get("msg"))
        raise ConfigError(message, {"key": key}) from e


def load_config_file(path: Path) -> dict[str, Any]:
    """
    Read a flat ``key=value`` config file.

    Args:
        path: Path to the config file

    Returns:
        Mapping of raw string values

    Raises:
        ConfigError: If the file is missing, unreadable or malformed
    """
    if not path.is_file():
        raise ConfigError(f"config file '{path}' not found", {"path": str(path)})

    try:
        values: dict[str, str | None] = dotenv_values(path)
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"config file '{path}' is unreadable: {e}", {"path": str(path)}) from e

    raw: dict[str, Any] = {}
    for key, value in values.items():
        name: str = key.strip().lower()
        if name not in CONFIG_KEYS:
            raise ConfigError(f"unknown config key '{key}' in '{path}'", {"key": key})
        if value is None or value.strip() == "":
            raise ConfigError(f"config key '{key}' has no value in '{path}'", {"key": key})
        raw[name] = value.strip()

    logger.info("Config file loaded", path=str(path), keys=sorted(raw))
    return raw
