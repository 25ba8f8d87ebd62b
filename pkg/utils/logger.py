"""
Logging Framework for the slice-and-ask analysis engine

Provides structured logging with:
- Console output (colored via colorlog)
- File output (rotating logs)
- Error-only file
- Context injection (partition_id tracking)
"""

import functools
import logging
import os
import time
import uuid
from logging.handlers import RotatingFileHandler
from typing import Optional

import colorlog


LOG_COLORS = {
    'DEBUG': 'white',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'bold_red',
}

DETAILED_FORMAT = (
    '%(asctime)s - %(levelname)s - %(name)s - '
    '[partition:%(partition_id)s] - %(message)s'
)
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class ContextFilter(logging.Filter):
    """Add context information to log records"""

    def filter(self, record):
        if not hasattr(record, 'partition_id'):
            record.partition_id = 'N/A'
        if not hasattr(record, 'correlation_id'):
            record.correlation_id = 'N/A'
        return True


def _rotating_handler(path: str, level: int, max_bytes: int, backup_count: int) -> RotatingFileHandler:
    log_dir = os.path.dirname(path)
    if log_dir and not os.path.exists(log_dir):
        os.makedirs(log_dir, exist_ok=True)

    handler = RotatingFileHandler(
        path,
        maxBytes=max_bytes,
        backupCount=backup_count,
        encoding='utf-8'
    )
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(fmt=DETAILED_FORMAT, datefmt=DATE_FORMAT))
    return handler


def setup_logging(
    log_level: str = "WARNING",
    log_file: str = "",
    error_log_file: str = "",
    max_bytes: int = 10 * 1024 * 1024,  # 10MB
    backup_count: int = 5,
    enable_console: bool = True,
    enable_colors: bool = True
) -> None:
    """
    Setup application logging

    Args:
        log_level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: Path to main log file (empty disables it)
        error_log_file: Path to error-only log file (empty disables it)
        max_bytes: Max size of log file before rotation
        backup_count: Number of backup log files to keep
        enable_console: Enable console output (stderr)
        enable_colors: Enable colored console output
    """
    level = getattr(logging, log_level.upper(), logging.WARNING)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()

    context_filter = ContextFilter()

    if enable_console:
        console_handler = logging.StreamHandler()
        console_handler.setLevel(level)

        if enable_colors:
            console_formatter = colorlog.ColoredFormatter(
                fmt='%(log_color)s' + DETAILED_FORMAT,
                datefmt=DATE_FORMAT,
                log_colors=LOG_COLORS
            )
        else:
            console_formatter = logging.Formatter(fmt=DETAILED_FORMAT, datefmt=DATE_FORMAT)

        console_handler.setFormatter(console_formatter)
        console_handler.addFilter(context_filter)
        root_logger.addHandler(console_handler)

    # File Handler (all logs with rotation)
    if log_file:
        file_handler = _rotating_handler(log_file, logging.DEBUG, max_bytes, backup_count)
        file_handler.addFilter(context_filter)
        root_logger.addHandler(file_handler)

    # Error File Handler (errors only)
    if error_log_file:
        error_handler = _rotating_handler(error_log_file, logging.ERROR, max_bytes, backup_count)
        error_handler.addFilter(context_filter)
        root_logger.addHandler(error_handler)

    # Suppress noisy third-party loggers
    logging.getLogger('urllib3').setLevel(logging.WARNING)
    logging.getLogger('werkzeug').setLevel(logging.WARNING)

    logger = logging.getLogger(__name__)
    logger.debug(f"Logging initialized - Level: {log_level}")


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance for a module

    Args:
        name: Usually __name__ of the calling module

    Returns:
        Logger instance
    """
    return logging.getLogger(name)


class LogContext:
    """
    Context manager for tagging log messages with the partition being processed

    Usage:
        with LogContext(partition_id=3):
            logger.info("Slicing")
            # Output: ... [partition:3] - Slicing
    """

    def __init__(self, partition_id: Optional[int] = None, correlation_id: Optional[str] = None):
        self.partition_id = partition_id
        self.correlation_id = correlation_id or self._generate_correlation_id()
        self.old_factory = None

    def __enter__(self):
        self.old_factory = logging.getLogRecordFactory()

        partition_id = self.partition_id
        correlation_id = self.correlation_id
        old_factory = self.old_factory

        def record_factory(*args, **kwargs):
            record = old_factory(*args, **kwargs)
            record.partition_id = partition_id if partition_id is not None else 'N/A'
            record.correlation_id = correlation_id
            return record

        logging.setLogRecordFactory(record_factory)
        return self

    def __exit__(self, _exc_type, _exc_val, _exc_tb):
        if self.old_factory:
            logging.setLogRecordFactory(self.old_factory)

    @staticmethod
    def _generate_correlation_id() -> str:
        """Generate a unique correlation ID"""
        return str(uuid.uuid4())[:8]


def log_function_call(func):
    """
    Decorator to log function calls with timing

    Usage:
        @log_function_call
        def build_cfg(unit):
            ...
    """

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        logger = get_logger(func.__module__)
        func_name = func.__name__

        logger.debug(f"Calling {func_name}()")

        start_time = time.time()
        try:
            result = func(*args, **kwargs)
            elapsed = time.time() - start_time
            logger.debug(f"{func_name}() completed in {elapsed:.3f}s")
            return result
        except Exception as e:
            elapsed = time.time() - start_time
            logger.error(f"{func_name}() failed after {elapsed:.3f}s: {str(e)}")
            raise

    return wrapper


# Initialize logging on module import (with defaults)
# Can be reconfigured later with setup_logging()
try:
    from config.settings import settings
    setup_logging(
        log_level=settings.LOG_LEVEL,
        log_file=settings.LOG_FILE,
        error_log_file=settings.ERROR_LOG_FILE
    )
except Exception:
    # Fallback if settings not available
    setup_logging()
