"""Layered run configuration: TOML file < environment < CLI flags."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - version dependent
    import tomli as tomllib

ENV_PREFIX = "FIGLANG_"


def load_config_file(path: Optional[str | Path]) -> dict:
    if path is None:
        return {}
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def resolve(
    name: str,
    flag_value: Any,
    config: dict,
    default: Any = None,
    cast: Optional[type] = None,
) -> Any:
    """Flag beats environment beats config file beats default."""
    if flag_value is not None:
        return flag_value
    env_value = os.environ.get(ENV_PREFIX + name.upper().replace("-", "_"))
    if env_value is not None:
        return cast(env_value) if cast else env_value
    if name in config:
        value = config[name]
        return cast(value) if cast else value
    return default


def effective_config(names_defaults: dict[str, Any], args: Any, config: dict) -> dict:
    """Resolved key/value view for --print-config and manifests."""
    resolved = {}
    for name, default in names_defaults.items():
        flag = getattr(args, name.replace("-", "_"), None)
        resolved[name] = resolve(name, flag, config, default)
    return resolved
