"""Settings resolution for the ``mlpa`` CLI.

Precedence, highest first: explicit flag, environment variable,
``mlpa.yaml`` settings file, built-in default.
"""

from __future__ import annotations

import os
from collections.abc import Mapping
from dataclasses import dataclass
from pathlib import Path

import yaml

from mlpa_design.errors import ConfigError

# ── Constants ────────────────────────────────────────────────────────────────

CONFIG_FILENAMES = ("mlpa.yaml", ".mlpa.yaml")

ENV_CACHE_DIR = "MLPA_CACHE_DIR"
ENV_WORKERS = "MLPA_WORKERS"

DEFAULT_CACHE_DIR = Path("~/.cache/mlpa-design")

_KNOWN_KEYS = frozenset({"cache_dir", "workers", "cache"})


@dataclass(frozen=True)
class Settings:
    """Resolved runtime settings."""

    cache_dir: Path
    workers: int = 1
    use_cache: bool = True


# ── Settings file ────────────────────────────────────────────────────────────


def find_config_file(start: Path | None = None) -> Path | None:
    """Walk up from *start* (default: cwd) to find ``mlpa.yaml``."""
    current = (start or Path.cwd()).resolve()
    for parent in [current, *current.parents]:
        for name in CONFIG_FILENAMES:
            candidate = parent / name
            if candidate.is_file():
                return candidate
    return None


def read_config_file(path: Path) -> dict:
    """Parse a settings file and reject anything but a known-key mapping."""
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"Cannot read settings file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"Invalid YAML in {path}: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Settings file {path} must be a YAML mapping.")
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"Unknown settings key(s) in {path}: {', '.join(unknown)}")
    return data


def _parse_workers(value: object, source: str) -> int:
    try:
        workers = int(value)  # type: ignore[arg-type]
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: workers must be an integer, got {value!r}") from exc
    if workers < 1:
        raise ConfigError(f"{source}: workers must be >= 1, got {workers}")
    return workers


def _parse_cache_flag(value: object, source: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{source}: cache must be true or false, got {value!r}")
    return value


# ── Public API ───────────────────────────────────────────────────────────────


def load_settings(
    *,
    config_path: Path | None = None,
    cache_dir: Path | None = None,
    workers: int | None = None,
    no_cache: bool = False,
    environ: Mapping[str, str] | None = None,
    search_from: Path | None = None,
) -> Settings:
    """Resolve :class:`Settings` from flags, environment and settings file.

    Parameters
    ----------
    config_path : Path | None
        Explicit settings file; when *None* one is searched for upward
        from *search_from* (default: cwd).
    cache_dir, workers, no_cache
        Values given on the command line; *None* means "not given".
    environ : mapping | None
        Environment to read; defaults to ``os.environ``.
    """
    env = os.environ if environ is None else environ
    path = config_path or find_config_file(search_from)
    file_data = read_config_file(path) if path is not None else {}

    if cache_dir is not None:
        resolved_dir = cache_dir
    elif env.get(ENV_CACHE_DIR):
        resolved_dir = Path(env[ENV_CACHE_DIR])
    elif "cache_dir" in file_data:
        resolved_dir = Path(str(file_data["cache_dir"]))
    else:
        resolved_dir = DEFAULT_CACHE_DIR

    if workers is not None:
        resolved_workers = _parse_workers(workers, "--workers")
    elif env.get(ENV_WORKERS):
        resolved_workers = _parse_workers(env[ENV_WORKERS], ENV_WORKERS)
    elif "workers" in file_data:
        resolved_workers = _parse_workers(file_data["workers"], str(path))
    else:
        resolved_workers = 1

    file_cache = _parse_cache_flag(file_data.get("cache", True), str(path))
    use_cache = not no_cache and file_cache

    return Settings(
        cache_dir=resolved_dir.expanduser(),
        workers=resolved_workers,
        use_cache=use_cache,
    )
