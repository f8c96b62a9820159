"""
Configuration management with environment variables and defaults.
Uses pydantic-settings for validation.
"""

from typing import Optional

from pydantic import Field
from pydantic import ValidationError as SchemaError
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.core.exceptions import ConfigurationError
from app.core.models import ConflictThresholds, RemapPolicy


class Settings(BaseSettings):
    """Toolkit configuration, read from CVD_* environment variables"""

    model_config = SettingsConfigDict(
        env_prefix="CVD_",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="WARNING", pattern="^(DEBUG|INFO|WARNING|ERROR|CRITICAL)$")
    json_logs: bool = Field(default=False)

    # Conflict gates (delta-E units)
    distinct_normal: float = Field(default=15.0, gt=0.0)
    confusable_sim: float = Field(default=12.0, gt=0.0)

    # Remap search
    hue_step: float = Field(default=15.0, gt=0.0)
    max_rotation: float = Field(default=180.0, ge=0.0, le=180.0)
    max_passes: int = Field(default=4, ge=1, le=64)
    opposite_first: bool = Field(default=False)

    # Performance
    image_workers: int = Field(default=1, ge=1, le=64)

    def thresholds(self) -> ConflictThresholds:
        return ConflictThresholds(
            distinct_normal=self.distinct_normal,
            confusable_sim=self.confusable_sim,
        )

    def policy(self) -> RemapPolicy:
        return RemapPolicy(
            hue_step=self.hue_step,
            max_rotation=self.max_rotation,
            max_passes=self.max_passes,
            opposite_first=self.opposite_first,
        )


# Singleton instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create settings instance; bad CVD_* values raise ConfigurationError"""
    global _settings
    if _settings is None:
        try:
            _settings = Settings()
        except SchemaError as e:
            problems = "; ".join(
                f"CVD_{'.'.join(str(p) for p in err['loc']).upper()}: {err['msg']}" for err in e.errors()
            )
            raise ConfigurationError(f"Invalid environment setting: {problems}") from e
    return _settings


# Convenience function for testing
def override_settings(**kwargs) -> Settings:
    """Override settings for testing"""
    global _settings
    _settings = Settings(**kwargs)
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
