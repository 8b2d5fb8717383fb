"""
Centralized Logging Configuration.

This module provides the toolkit's logging setup:
- Colored console output on stderr (stdout is reserved for reports)
- Optional plain-text file logging
- Level taken from settings (VFKIT_LOG_LEVEL) unless given explicitly
"""
import logging
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional

from app.config.settings import settings

ROOT_LOGGER_NAME = "vfkit"


# ANSI color codes for console output
class LogColors:
    """ANSI escape codes for colored console output."""
    RESET = "\033[0m"
    RED = "\033[91m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    CYAN = "\033[96m"
    GRAY = "\033[90m"
    BOLD = "\033[1m"


class ColoredFormatter(logging.Formatter):
    """Formatter that colors level and logger names when writing to a terminal."""

    LEVEL_COLORS = {
        logging.DEBUG: LogColors.GRAY,
        logging.INFO: LogColors.GREEN,
        logging.WARNING: LogColors.YELLOW,
        logging.ERROR: LogColors.RED,
        logging.CRITICAL: LogColors.RED + LogColors.BOLD,
    }

    def __init__(self, fmt: str, datefmt: str, use_color: bool = True):
        super().__init__(fmt, datefmt=datefmt)
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        if not self.use_color:
            return super().format(record)
        # Work on a copy so file handlers see the plain record
        record = logging.makeLogRecord(record.__dict__)
        color = self.LEVEL_COLORS.get(record.levelno, LogColors.RESET)
        record.levelname = f"{color}{record.levelname:8}{LogColors.RESET}"
        record.name = f"{LogColors.CYAN}{record.name}{LogColors.RESET}"
        return super().format(record)


def setup_logging(
    level: Optional[int] = None,
    log_to_file: Optional[bool] = None,
    log_dir: Optional[str] = None,
) -> logging.Logger:
    """
    Configure the toolkit logger.

    Args:
        level: Logging level (default: settings.log_level)
        log_to_file: Whether to also log to file (default: settings.log_to_file)
        log_dir: Directory for log files (default: settings.log_dir)

    Returns:
        The configured ``vfkit`` logger
    """
    if level is None:
        level = getattr(logging, settings.log_level, logging.WARNING)
    if log_to_file is None:
        log_to_file = settings.log_to_file
    if log_dir is None:
        log_dir = settings.log_dir

    logger = logging.getLogger(ROOT_LOGGER_NAME)

    # Clear any existing handlers to avoid duplicates
    logger.handlers.clear()
    logger.setLevel(level)
    logger.propagate = False

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(ColoredFormatter(
        '%(asctime)s │ %(levelname)s │ %(name)s │ %(message)s',
        datefmt='%H:%M:%S',
        use_color=sys.stderr.isatty(),
    ))
    logger.addHandler(console_handler)

    if log_to_file:
        try:
            log_path = Path(log_dir)
            log_path.mkdir(parents=True, exist_ok=True)

            log_filename = f"vfkit_{datetime.now().strftime('%Y%m%d_%H%M%S')}.log"
            file_handler = logging.FileHandler(log_path / log_filename, encoding='utf-8')
            file_handler.setLevel(logging.DEBUG)
            file_handler.setFormatter(logging.Formatter(
                '%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d | %(message)s',
                datefmt='%Y-%m-%d %H:%M:%S'
            ))
            logger.addHandler(file_handler)
            # File handler wants DEBUG even when the console is quieter
            logger.setLevel(logging.DEBUG)

            logger.debug(f"Log file created: {log_path / log_filename}")
        except OSError as e:
            logger.warning(f"Could not create log file: {e}")

    return logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a child logger for a specific module.

    Args:
        name: Component name (e.g., 'core.folding', 'stages.intersection')

    Returns:
        Logger instance with hierarchical naming

    Example:
        >>> logger = get_logger("core.folding")
        >>> logger.debug("merging blocks 3 and 7")
    """
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


# Initialize the toolkit logger on module import
_root_logger = setup_logging()
