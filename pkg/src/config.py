"""Application configuration settings."""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    # Application
    app_name: str = "CTOA Lab"
    app_version: str = "0.1.0"
    environment: str = Field(default='production')
    log_level: str = Field(default='WARNING')

    # Output locations
    output_dir: Path = Field(
        default=Path("figures"),
        description="Directory receiving figure CSV files",
    )
    report_path: Path = Field(
        default=Path("verification_report.json"),
        description="Default target of the verification report",
    )

    # Reproducibility
    source_date_epoch: int = Field(
        default=0,
        description="Seconds since epoch stamped into reports (keeps reports byte-identical)",
    )

    # API
    api_prefix: str = "/api/v1"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="CTOA_",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
