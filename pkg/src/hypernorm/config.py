"""Process-wide settings and logging setup.

Settings come from environment variables, optionally seeded from a local ``.env``
file via python-dotenv:

- HYPERNORM_THREADS: worker cap for optimizer restarts and oracle grid chunks
- HYPERNORM_LOG_LEVEL: log level for the ``hypernorm`` logger (default WARNING)
- HYPERNORM_DENSE_CAP: largest dense tensor (entry count) built from graphs/generators
- HYPERNORM_GRID_CAP: largest oracle grid (evaluation count)
"""

import logging
import os
import sys

from pydantic import BaseModel, Field

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _default_threads() -> int:
    return max(1, min(4, os.cpu_count() or 1))


class Settings(BaseModel):
    """Validated runtime settings."""

    threads: int = Field(default_factory=_default_threads, ge=1, description="Worker parallelism cap")
    log_level: str = Field(default="WARNING", description="Log level name for the hypernorm logger")
    dense_cap: int = Field(default=10**7, ge=1, description="Maximum dense tensor entry count")
    grid_cap: int = Field(default=10**8, ge=1, description="Maximum oracle grid evaluations")


_settings: Settings | None = None


def load_settings() -> Settings:
    """Read settings from the environment (after loading ``.env`` if present)."""
    try:
        from dotenv import load_dotenv

        load_dotenv()
    except ImportError:
        pass

    values: dict[str, str] = {}
    for field_name, env_name in (
        ("threads", "HYPERNORM_THREADS"),
        ("log_level", "HYPERNORM_LOG_LEVEL"),
        ("dense_cap", "HYPERNORM_DENSE_CAP"),
        ("grid_cap", "HYPERNORM_GRID_CAP"),
    ):
        raw = os.getenv(env_name)
        if raw:
            values[field_name] = raw
    return Settings.model_validate(values)


def get_settings() -> Settings:
    """Get the cached settings instance."""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached settings so the next access re-reads the environment."""
    global _settings
    _settings = None


def configure_logging(level: str | None = None) -> None:
    """Attach a single stderr handler to the ``hypernorm`` logger.

    Reports go to stdout, so logging must stay on stderr.
    """
    logger = logging.getLogger("hypernorm")
    level_name = (level or get_settings().log_level).upper()
    logger.setLevel(getattr(logging, level_name, logging.WARNING))
    if not any(getattr(h, "_hypernorm", False) for h in logger.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handler._hypernorm = True  # type: ignore[attr-defined]
        logger.addHandler(handler)
