"""
Logging Utility

LEARNING POINTS:
- Centralized logging configuration for every pipeline component
- Colored console output when attached to a terminal, plain text otherwise
- Optional file logging for long training runs
- Component-named loggers (Stage.decode, Trainer, Rerank.reverse, ...)
- One call (set_log_level) retunes every logger created here
"""

import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional, Union


class Colors:
    """Terminal color codes for different log levels."""
    GREY = "\033[90m"
    BLUE = "\033[94m"
    YELLOW = "\033[93m"
    RED = "\033[91m"
    BOLD_RED = "\033[91;1m"
    RESET = "\033[0m"


class ColoredFormatter(logging.Formatter):
    """
    Format: [TIME] LEVEL     LOGGER_NAME: MESSAGE
    Example: [12:34:56] INFO     Trainer: epoch=3 loss=1.2041 char_accuracy=0.6312
    """

    COLORS = {
        logging.DEBUG: Colors.GREY,
        logging.INFO: Colors.BLUE,
        logging.WARNING: Colors.YELLOW,
        logging.ERROR: Colors.RED,
        logging.CRITICAL: Colors.BOLD_RED,
    }

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        level = f"{record.levelname:8s}"
        if self.use_color:
            color = self.COLORS.get(record.levelno, Colors.RESET)
            level = f"{color}{level}{Colors.RESET}"
        timestamp = datetime.fromtimestamp(record.created).strftime("%H:%M:%S")
        message = record.getMessage()
        if record.exc_info:
            message = f"{message}\n{self.formatException(record.exc_info)}"
        return f"[{timestamp}] {level} {record.name}: {message}"


_LOGGERS: Dict[str, logging.Logger] = {}
_LEVEL: int = logging.INFO


def _coerce_level(level: Union[int, str]) -> int:
    if isinstance(level, int):
        return level
    resolved = logging.getLevelName(level.upper())
    if not isinstance(resolved, int):
        raise ValueError(f"Unknown log level: {level}")
    return resolved


def setup_logger(
    name: str,
    level: Optional[Union[int, str]] = None,
    log_file: Optional[Path] = None
) -> logging.Logger:
    """
    Create and configure a logger.

    Args:
        name: Logger name (component name, e.g. "Stage.train")
        level: Minimum log level; defaults to the level set by set_log_level
        log_file: Optional file path to also write logs to

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Avoid adding handlers multiple times
    if logger.handlers:
        return logger

    resolved = _coerce_level(level) if level is not None else _LEVEL
    logger.setLevel(resolved)
    logger.propagate = False

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setFormatter(ColoredFormatter(use_color=sys.stdout.isatty()))
    logger.addHandler(console_handler)

    if log_file:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(
            "[%(asctime)s] %(levelname)-8s %(name)s: %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S"
        ))
        logger.addHandler(file_handler)

    _LOGGERS[name] = logger
    return logger


def set_log_level(level: Union[int, str]) -> None:
    """Apply a level to every logger created by setup_logger (and future ones)."""
    global _LEVEL
    _LEVEL = _coerce_level(level)
    for logger in _LOGGERS.values():
        logger.setLevel(_LEVEL)


# LEARNING QUESTIONS:
# Q1: Why is the console handler attached to stdout, not stderr?
# A1: Training progress lines (epoch/loss/accuracy) are part of the
#     program's regular output and are piped to files by experiment scripts.

# Q2: When are colors disabled?
# A2: Whenever stdout is not a TTY (pipes, files, pytest capture), so log
#     files never contain ANSI escape codes.
