"""
Handler setup for the command-line runner. Library modules only ever
call logging.getLogger(__name__); this module attaches the file and
console handlers once, at the top of the "src" logger tree.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional

LOG_FORMAT = '%(asctime)s | %(name)s | %(levelname)s | %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
ROOT_LOGGERS = ("Krein", "src")


def setup_logging(config: Dict[str, Any], level_override: Optional[str] = None) -> logging.Logger:
    """
    Attach a rotating file handler and a stderr console handler.

    Args:
        config: the ``logging`` section of the runtime settings
        level_override: console level from the command line

    Returns:
        The runner logger ("Krein").
    """
    level = getattr(logging, str(config.get('level', 'INFO')).upper(), logging.INFO)
    console_level = level_override or config.get('console_level', 'WARNING')
    console_level = getattr(logging, str(console_level).upper(), logging.WARNING)

    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    handlers = []
    file_error = None
    log_file = config.get('file')
    if log_file:
        try:
            Path(log_file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = RotatingFileHandler(
                log_file,
                maxBytes=int(config.get('max_bytes', 5 * 1024 * 1024)),
                backupCount=int(config.get('backup_count', 3)),
                encoding='utf-8',
            )
            file_handler.setLevel(level)
            file_handler.setFormatter(formatter)
            handlers.append(file_handler)
        except OSError as e:
            file_error = e

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)
    console_handler.setFormatter(formatter)
    handlers.append(console_handler)

    for name in ROOT_LOGGERS:
        logger = logging.getLogger(name)
        logger.setLevel(min(level, console_level))
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)
            handler.close()
        for handler in handlers:
            logger.addHandler(handler)
        logger.propagate = False

    runner = logging.getLogger("Krein")
    if file_error is not None:
        runner.warning(f"⚠️ cannot open log file {log_file}: {file_error}; logging to stderr only")
    return runner
