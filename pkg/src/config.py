"""
Runtime settings read from the environment (and `config/.env` when present).
"""
import os
from dataclasses import dataclass
from dotenv import load_dotenv

from .errors import ConfigurationError

load_dotenv('config/.env')

DEFAULT_MAX_ITERS = 1_000_000_000
DEFAULT_PROGRESS_EVERY = 1_000_000
DEFAULT_MAX_SUBSET_STATES = 20


@dataclass(frozen=True)
class Settings:
    """Tunable limits and logging configuration."""

    max_iterations: int = DEFAULT_MAX_ITERS
    progress_every: int = DEFAULT_PROGRESS_EVERY
    max_subset_states: int = DEFAULT_MAX_SUBSET_STATES
    log_level: str = 'WARNING'


def _positive_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        # accept "1e9" as well as "1000000000"
        value = int(float(raw)) if any(c in raw for c in '.eE') else int(raw)
    except ValueError:
        raise ConfigurationError(f"{name} must be a positive integer, got {raw!r}")
    if value <= 0:
        raise ConfigurationError(f"{name} must be a positive integer, got {raw!r}")
    return value


def get_settings() -> Settings:
    """
    Build the settings from the current environment.

    Returns:
        Settings instance; values are re-read on every call
    """
    return Settings(
        max_iterations=_positive_int('ICTMC_MAX_ITERS', DEFAULT_MAX_ITERS),
        progress_every=_positive_int('ICTMC_PROGRESS_EVERY', DEFAULT_PROGRESS_EVERY),
        max_subset_states=_positive_int('ICTMC_MAX_SUBSET_STATES', DEFAULT_MAX_SUBSET_STATES),
        log_level=os.getenv('ICTMC_LOG_LEVEL', 'WARNING').upper(),
    )
