"""Runtime configuration: JSON file values layered under env overrides.

Precedence is environment variable over file value over default, so a
deployment can pin the file and still retarget one knob per process.
"""

import json
import os
from dataclasses import dataclass

from .errors import ConfigError

_ENV_PREFIX = "PARLANCE_"

# key -> coercion applied to file and env values alike
_FIELDS = {
    "host": str,
    "port": int,
    "seed": int,
    "sidecar": str,
    "idle_timeout": float,
}


@dataclass(frozen=True)
class Config:
    host: str = "127.0.0.1"
    port: int = 8756
    seed: int = 0
    sidecar: str | None = None
    idle_timeout: float = 1800.0


def load_config(path: str | None = None, env=None) -> Config:
    env = os.environ if env is None else env
    values: dict[str, object] = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as err:
            raise ConfigError("cannot read config file: %s" % err)
        except json.JSONDecodeError as err:
            raise ConfigError("config file is not valid JSON: %s" % err)
        if not isinstance(raw, dict):
            raise ConfigError("config file must hold a JSON object")
        for key, value in raw.items():
            if key not in _FIELDS:
                raise ConfigError("unknown config key '%s'" % key)
            values[key] = value
    for key in _FIELDS:
        override = env.get(_ENV_PREFIX + key.upper())
        if override is not None:
            values[key] = override
    coerced: dict[str, object] = {}
    for key, value in values.items():
        try:
            coerced[key] = _FIELDS[key](value)
        except (TypeError, ValueError):
            raise ConfigError(
                "config value for '%s' must be %s" % (key, _FIELDS[key].__name__)
            )
    return Config(**coerced)
