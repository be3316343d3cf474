"""
Configuration module for the RBF-Stokeslets application.

This module centralizes all configuration settings and environment variable handling.
Settings are read with dotted paths and can be overridden from the environment
(or a .env file) with variables named ``RBFSTOKES_<PATH>``.
"""
import copy
import json
import logging
import os
from typing import Any, Optional

from dotenv import load_dotenv

ENV_PREFIX = "RBFSTOKES_"

# Load environment variables from .env file
load_dotenv()

# Application settings
APP_SETTINGS = {
    "interpolation": {
        "condition_threshold": 1e14,
    },
    "stokeslets": {
        "compensated_summation": False,
        "chunk_size": 2048,
    },
    "experiments": {
        "epsilon_range": [0.5, 10.0],
        "epsilon_count": 100,
        "epsilon_rtol": 0.01,
        "marker_count": 100,
    },
    "output": {
        "directory": "output",
    },
    "logging": {
        "level": "INFO",
    },
}


def get_env(key_name: str) -> Optional[str]:
    """
    Get a raw value from environment variables.

    Args:
        key_name: Name of the variable to retrieve

    Returns:
        The value or None if not found
    """
    return os.getenv(key_name)


def env_key(setting_path: str) -> str:
    """Environment variable name that overrides a dotted setting path."""
    return ENV_PREFIX + setting_path.replace(".", "_").upper()


def _coerce(raw: str, default: Any) -> Any:
    """Parse an environment string to the type of the default value."""
    if isinstance(default, bool):
        return raw.strip().lower() in {"1", "true", "yes", "on"}
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, (list, dict)):
        return json.loads(raw)
    return raw


def get_app_setting(setting_path: str) -> Any:
    """
    Get an application setting using dot notation.

    Args:
        setting_path: Path to the setting using dot notation (e.g., "stokeslets.chunk_size")

    Returns:
        The setting value (environment override first) or None if not found
    """
    parts = setting_path.split('.')
    current = APP_SETTINGS

    for part in parts:
        if not isinstance(current, dict) or part not in current:
            return None
        current = current[part]

    override = get_env(env_key(setting_path))
    if override is not None and not isinstance(current, dict):
        from .exceptions import ConfigurationError

        try:
            return _coerce(override, current)
        except ValueError as e:
            raise ConfigurationError(
                f"Invalid value for {env_key(setting_path)}: {override!r} ({e})"
            ) from e

    return copy.deepcopy(current)


def get_output_dir() -> str:
    """Directory where CLI and UI runs write their reports."""
    return get_app_setting("output.directory")


def configure_logging(level: Optional[str] = None) -> None:
    """Configure root logging for the CLI and the Streamlit app."""
    level = level or get_app_setting("logging.level")
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
