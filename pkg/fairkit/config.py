"""Configuration module for fairkit."""

import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

logger = logging.getLogger(__name__)

# Load environment variables from a local .env file, if present
load_dotenv()

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_prefix="FAIRKIT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Reproducibility
    seed: Optional[int] = Field(default=None, description="Fallback seed when no --seed flag is given")

    # Logging
    log_level: str = Field(default="WARNING")

    # Tolerances
    eps_rate: float = Field(default=1e-9, description="Absolute tolerance for equal probabilities")
    eps_prev: float = Field(default=1e-9, description="Minimum prevalence difference that counts as 'differs'")

    # Decision rules
    default_threshold: float = Field(default=0.5, description="Reference group's threshold; score >= t is positive")

    # Theorem fuzzing
    fuzz_trials: int = Field(default=10000)
    fuzz_examples: int = Field(default=3, description="Instances echoed in a FuzzReport")

    # Reports
    report_decimals: int = Field(default=4)


# Create settings instance
settings = Settings()


def configure_logging(level: Optional[str] = None) -> None:
    """Install a single stderr handler on the package logger.

    Args:
        level: Logging level name; falls back to ``settings.log_level``
    """
    root = logging.getLogger("fairkit")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel((level or settings.log_level).upper())
    root.propagate = False


def validate_config() -> bool:
    """Check that configured values are usable.

    Returns:
        True when every value is valid; problems are logged, never raised.
    """
    problems: List[str] = []

    if settings.eps_rate <= 0:
        problems.append("FAIRKIT_EPS_RATE must be positive")
    if settings.eps_prev <= 0:
        problems.append("FAIRKIT_EPS_PREV must be positive")
    if not 0.0 <= settings.default_threshold <= 1.0:
        problems.append("FAIRKIT_DEFAULT_THRESHOLD must lie in [0, 1]")
    if settings.fuzz_trials <= 0:
        problems.append("FAIRKIT_FUZZ_TRIALS must be positive")
    if not isinstance(logging.getLevelName(settings.log_level.upper()), int):
        problems.append(f"FAIRKIT_LOG_LEVEL {settings.log_level!r} is not a logging level")

    for problem in problems:
        logger.error("Invalid configuration: %s", problem)
    return not problems
