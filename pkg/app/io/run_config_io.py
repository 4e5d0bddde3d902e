"""Flat ``key = value`` run configuration files.

Blank lines and ``#`` comments are ignored. Keys are RunConfig field names
(dashes accepted in place of underscores) plus ``preset``. Values are
coerced to the field's declared type; ``none`` clears an optional value.
"""

import logging as log
import typing
from pathlib import Path
from typing import Any, Dict, Union

from app.config import ENCODING
from app.errors import ConfigError, ParseError
from app.models.run_config import RunConfig

TRUE_WORDS = {"1", "true", "yes", "on"}
FALSE_WORDS = {"0", "false", "no", "off"}


def _field_types() -> Dict[str, Any]:
    hints = typing.get_type_hints(RunConfig)
    hints["preset"] = str
    return hints


def _unwrap_optional(field_type):
    args = typing.get_args(field_type)
    if typing.get_origin(field_type) is Union and type(None) in args:
        return next(arg for arg in args if arg is not type(None)), True
    return field_type, False


def coerce_value(key: str, text: str, field_type) -> Any:
    """Convert ``text`` to ``field_type``, raising ConfigError on failure."""
    base, optional = _unwrap_optional(field_type)
    if optional and text.lower() in ("none", "null", ""):
        return None
    if base is bool:
        if text.lower() in TRUE_WORDS:
            return True
        if text.lower() in FALSE_WORDS:
            return False
        raise ConfigError(f"{key}: expected a boolean, got '{text}'")
    try:
        return base(text)
    except ValueError as e:
        raise ConfigError(f"{key}: cannot read '{text}' as {base.__name__}") from e


def load_run_config(file_path: Union[str, Path]) -> Dict[str, Any]:
    """Parse a run configuration file into typed RunConfig overrides."""
    types = _field_types()
    values: Dict[str, Any] = {}
    with open(file_path, encoding=ENCODING) as f:
        for line_number, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(file_path, line_number, "expected key = value")
            key, text = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in types:
                raise ConfigError(f"{file_path}:{line_number}: unknown configuration key '{key}'")
            values[key] = coerce_value(key, text, types[key])
    log.info("Read %d settings from %s", len(values), file_path)
    return values
