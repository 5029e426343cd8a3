"""
Configuration storage

Setup files are plain JSON validated by semifix.api.schemas.ConfigFile.
Named configurations live in <home>/configs/<name>.json; runtime settings
come from SEMIFIX_* environment variables.
"""

import json
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from pydantic import ValidationError

from semifix.api.schemas import ConfigFile
from semifix.errors import ConfigError
from semifix.oracle.linsolve import DEFAULT_EXACT_LIMIT, DEFAULT_PRIME_BITS

logger = logging.getLogger(__name__)

DEFAULT_HOME = Path.home() / ".semifix"


@dataclass(frozen=True)
class RuntimeSettings:
    home: Path
    log_level: str = "INFO"
    exact_limit: int = DEFAULT_EXACT_LIMIT
    prime_bits: int = DEFAULT_PRIME_BITS


def _int_env(name: str, default: int, minimum: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got '{raw}'", field=name)
    if value < minimum:
        raise ConfigError(f"must be at least {minimum}, got {value}", field=name)
    return value


def load_runtime_settings() -> RuntimeSettings:
    """
    Read SEMIFIX_HOME, SEMIFIX_LOG_LEVEL, SEMIFIX_EXACT_LIMIT and SEMIFIX_PRIME_BITS.

    Raises:
        ConfigError: If a numeric variable does not parse
    """
    home = os.environ.get("SEMIFIX_HOME")
    return RuntimeSettings(
        home=Path(home).expanduser() if home else DEFAULT_HOME,
        log_level=os.environ.get("SEMIFIX_LOG_LEVEL", "INFO").upper(),
        exact_limit=_int_env("SEMIFIX_EXACT_LIMIT", DEFAULT_EXACT_LIMIT, 0),
        prime_bits=_int_env("SEMIFIX_PRIME_BITS", DEFAULT_PRIME_BITS, 8),
    )


def _error_path(loc) -> str:
    return ".".join(str(part) for part in loc) or "<root>"


class ConfigStorage:
    """Load, validate and store setup configurations"""

    def __init__(self, data_dir: Optional[Path] = None):
        """
        Initialize config storage.

        Args:
            data_dir: Custom data directory. Defaults to SEMIFIX_HOME (~/.semifix)
        """
        if data_dir is None:
            self.data_dir = load_runtime_settings().home
        else:
            self.data_dir = Path(data_dir)

        self.configs_dir = self.data_dir / "configs"
        self.configs_dir.mkdir(parents=True, exist_ok=True)

    def config_file(self, name: str) -> Path:
        return self.configs_dir / f"{name}.json"

    def load_config(self, path: Union[str, Path]) -> Dict[str, Any]:
        """
        Read a JSON config file.

        Args:
            path: File to read; a bare name refers to a stored configuration

        Returns:
            The raw configuration dictionary

        Raises:
            FileNotFoundError: If the file doesn't exist
            ConfigError: If the file is not a JSON object
        """
        path = Path(path)
        if not path.exists() and path.suffix == "" and self.config_file(str(path)).exists():
            path = self.config_file(str(path))
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        text = path.read_text(encoding="utf-8")
        try:
            config = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON at column {e.colno}: {e.msg}", line=e.lineno)
        if not isinstance(config, dict):
            raise ConfigError("top level must be an object")
        logger.debug(f"Loaded config {path}")
        return config

    def parse_config(self, config: Dict[str, Any]) -> ConfigFile:
        """
        Validate a raw configuration.

        Raises:
            ConfigError: Naming every offending field path
        """
        try:
            return ConfigFile.model_validate(config)
        except ValidationError as e:
            problems = [f"{_error_path(err['loc'])}: {err['msg']}" for err in e.errors()]
            first = _error_path(e.errors()[0]["loc"]) if e.errors() else None
            raise ConfigError("; ".join(problems), field=first)

    def save_config(self, config: Union[ConfigFile, Dict[str, Any]], name: str) -> Path:
        """
        Validate and store a configuration under `name`.

        Returns:
            Path of the written file

        Raises:
            ConfigError: If the configuration is invalid
        """
        if not name or "/" in name or name.startswith("."):
            raise ConfigError(f"invalid config name '{name}'")
        if isinstance(config, dict):
            config = self.parse_config(config)
        target = self.config_file(name)
        target.write_text(json.dumps(config.model_dump(exclude_none=True), indent=2) + "\n", encoding="utf-8")
        logger.info(f"Saved config '{name}' to {target}")
        return target
