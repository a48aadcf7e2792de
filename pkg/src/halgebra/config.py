"""Runtime settings for halgebra.

Settings are resolved from defaults, an optional YAML file, environment variables
and explicit overrides, in that order of precedence.
"""

import logging
import os
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator

from halgebra.errors import ConfigError

logger = logging.getLogger("halgebra.config")

DEGREE_WINDOW_ENV = "HALG_DEGREE_WINDOW"
LOG_LEVEL_ENV = "HALG_LOG_LEVEL"


class Settings(BaseModel):
    """
    Caps and switches shared by every module.

    Attributes
    ----------
    degree_window : Tuple[int, int]
        Inclusive range of admissible degrees. Results outside it are an error.
    max_word_length : int
        Longest coalgebra word any computation may build.
    max_polynomial_degree : int
        Largest total degree of a polynomial coefficient in a simplex form.
    max_cochain_arity : int
        Largest Loday cochain arity the coboundary may produce.
    report_residual_limit : int
        Number of residual samples listed in CLI reports.
    max_workers : Optional[int]
        Worker processes for identity checks. None or 1 runs serially.
    """

    model_config = {"frozen": True}

    degree_window: Tuple[int, int] = (-8, 8)
    max_word_length: int = Field(default=6, ge=1)
    max_polynomial_degree: int = Field(default=12, ge=1)
    max_cochain_arity: int = Field(default=4, ge=1)
    report_residual_limit: int = Field(default=20, ge=1)
    max_workers: Optional[int] = Field(default=None, ge=1)

    @field_validator("degree_window")
    @classmethod
    def _ordered_window(cls, value: Tuple[int, int]) -> Tuple[int, int]:
        low, high = value
        if low > high:
            raise ValueError(f"degree window {value} is empty")
        return value

    def in_window(self, degree: int) -> bool:
        """Return True when ``degree`` lies inside the degree window."""
        low, high = self.degree_window
        return low <= degree <= high


def parse_degree_window(text: str) -> Tuple[int, int]:
    """
    Parse a degree window written as ``lo..hi`` or ``lo,hi``.

    Examples
    --------
    >>> parse_degree_window("-4..4")
    (-4, 4)
    >>> parse_degree_window("0,3")
    (0, 3)
    """
    separator = ".." if ".." in text else ","
    parts = text.split(separator)
    if len(parts) != 2:
        raise ConfigError(f"Cannot parse degree window '{text}'; expected 'lo..hi'")
    try:
        low, high = int(parts[0].strip()), int(parts[1].strip())
    except ValueError as e:
        raise ConfigError(f"Cannot parse degree window '{text}': {e}") from e
    if low > high:
        raise ConfigError(f"Degree window '{text}' is empty")
    return low, high


def _environment_overrides() -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    window = os.environ.get(DEGREE_WINDOW_ENV)
    if window:
        overrides["degree_window"] = parse_degree_window(window)
    return overrides


def load_settings(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> Settings:
    """
    Build settings from a YAML file, the environment and explicit overrides.

    Parameters
    ----------
    config_path : Optional[Union[str, Path]], optional
        YAML file holding either a ``halgebra:`` mapping or a flat mapping.
    overrides : Optional[Dict[str, Any]], optional
        Values that win over every other source. ``None`` values are ignored.

    Returns
    -------
    Settings
        The validated settings.

    Raises
    ------
    ConfigError
        If the file cannot be read or the merged values do not validate.
    """
    values: Dict[str, Any] = {}
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"Config file '{path}' not found")
        try:
            with open(path, encoding="utf-8") as f:
                loaded = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Error loading configuration: {e}") from e
        if not isinstance(loaded, dict):
            raise ConfigError(f"Config file '{path}' must contain a mapping")
        section = loaded.get("halgebra", loaded)
        values.update(section or {})
        logger.debug(f"Loaded settings from {path}: {sorted(values)}")

    values.update(_environment_overrides())
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid settings: {e}") from e


_active: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the active settings, building them from the environment on first use."""
    global _active
    if _active is None:
        _active = load_settings()
    return _active


def set_settings(settings: Optional[Settings]) -> None:
    """Install ``settings`` globally. ``None`` resets to environment defaults on next use."""
    global _active
    _active = settings


@contextmanager
def use_settings(settings: Optional[Settings] = None, **changes: Any) -> Iterator[Settings]:
    """
    Temporarily install settings for the duration of a ``with`` block.

    Examples
    --------
    >>> with use_settings(max_word_length=3) as s:
    ...     s.max_word_length
    3
    """
    global _active
    previous = _active
    base = settings if settings is not None else get_settings()
    current = base.model_copy(update=changes) if changes else base
    _active = current
    try:
        yield current
    finally:
        _active = previous
