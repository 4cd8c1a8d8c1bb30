"""
Unified logging helper.

`setup_logging()` installs, once per process:
* human-readable lines on stdout
* daily-rotated files under Config.LOG_DIR

`get_logger(__name__)` returns a structlog logger whose key/value events are
rendered through those standard-library handlers.
"""

from __future__ import annotations

import logging
import sys
from logging.handlers import TimedRotatingFileHandler
from typing import Final, Optional

import structlog

from ..core.config import Config

_ROOT: Final[str] = "adr_planner"

structlog.configure(
    processors=[
        structlog.stdlib.filter_by_level,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.KeyValueRenderer(key_order=["event"], sort_keys=False),
    ],
    logger_factory=structlog.stdlib.LoggerFactory(),
    wrapper_class=structlog.stdlib.BoundLogger,
    cache_logger_on_first_use=True,
)


def _file_handler(name: str) -> logging.Handler:
    Config.LOG_DIR.mkdir(parents=True, exist_ok=True)
    handler = TimedRotatingFileHandler(
        Config.LOG_DIR / f"{name}.log", when="midnight", backupCount=14, encoding="utf-8"
    )
    handler.setFormatter(logging.Formatter(Config.LOG_FORMAT, Config.LOG_DATEFMT))
    return handler


def _stdout_handler() -> logging.Handler:
    handler = logging.StreamHandler(sys.stdout)
    handler.setFormatter(logging.Formatter(Config.LOG_FORMAT, Config.LOG_DATEFMT))
    return handler


def setup_logging(level: Optional[str] = None, *, to_file: Optional[bool] = None) -> logging.Logger:
    """Configure the package logger; repeated calls only adjust the level."""
    logger = logging.getLogger(_ROOT)
    logger.setLevel(getattr(logging, (level or Config.LOG_LEVEL).upper(), logging.INFO))
    if logger.handlers:  # already configured
        return logger

    logger.addHandler(_stdout_handler())
    if Config.LOG_TO_FILE if to_file is None else to_file:
        logger.addHandler(_file_handler(_ROOT))
    logger.propagate = False
    return logger


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)
