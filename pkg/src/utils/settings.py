#!/usr/bin/env python3
"""
⚙️ RUNTIME SETTINGS
============================================================
Loads config/config.yaml (logging, numerics, parallelism) with
built-in defaults merged underneath, and applies the
KREIN_THREADS override from the environment or a .env file.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_FILE = "config/config.yaml"
THREADS_ENV = "KREIN_THREADS"


def get_default_settings() -> Dict[str, Any]:
    """Built-in settings used when config/config.yaml is absent or partial"""
    return {
        'logging': {
            'level': 'INFO',
            'console_level': 'WARNING',
            'file': 'logs/krein.log',
            'max_bytes': 5 * 1024 * 1024,
            'backup_count': 3,
        },
        'numerics': {
            'tol': 1e-12,
            'quad_order': 32,
            'brute_force_grid': 4000,
            'flow_points': 20,
        },
        'parallel': {
            'threads': 4,
        },
    }


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def create_default_settings(path: Path) -> None:
    """Write the built-in defaults to ``path``"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        yaml.dump(get_default_settings(), f, default_flow_style=False, sort_keys=False)
    logger.info(f"📝 Default settings created: {path}")


def load_settings(settings_file: Optional[str] = None, create_missing: bool = False) -> Dict[str, Any]:
    """
    Load runtime settings.

    Args:
        settings_file: YAML path; defaults to config/config.yaml
        create_missing: write the defaults when the file does not exist

    Returns:
        Settings dictionary with defaults filled in and the thread count
        resolved against KREIN_THREADS.
    """
    path = Path(settings_file or DEFAULT_SETTINGS_FILE)
    settings = get_default_settings()
    if path.exists():
        try:
            with open(path, 'r', encoding='utf-8') as f:
                settings = _merge(settings, yaml.safe_load(f) or {})
        except (OSError, yaml.YAMLError) as e:
            logger.warning(f"❌ Failed to load settings {path}: {e}; using defaults")
    elif create_missing:
        create_default_settings(path)

    settings['parallel']['threads'] = resolve_threads(settings['parallel'].get('threads'))
    return settings


def resolve_threads(default: Optional[int] = None) -> int:
    """Thread cap: KREIN_THREADS (environment or .env) wins over the settings value"""
    load_dotenv(override=False)
    raw = os.getenv(THREADS_ENV)
    if raw:
        try:
            value = int(raw)
            if value >= 1:
                return value
        except ValueError:
            pass
        logger.warning(f"⚠️ Ignoring invalid {THREADS_ENV}={raw!r}")
    if default is None:
        return os.cpu_count() or 1
    return max(1, int(default))
