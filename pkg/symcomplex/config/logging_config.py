"""
Logging configuration using Loguru.

stdout carries command output (sequences, CSV, JSON), so every sink here
writes to stderr or to a file.
"""
import sys
from typing import Optional

from loguru import logger

from symcomplex.config.settings import settings


def setup_logging(level: Optional[str] = None, log_format: Optional[str] = None):
    """Configure structured logging."""
    level = (level or settings.log_level).upper()
    log_format = log_format or settings.log_format

    # Remove default handler
    logger.remove()

    if log_format == "json":
        logger.add(
            sys.stderr,
            format="{time} | {level} | {message}",
            level=level,
            serialize=True,
            backtrace=True,
            diagnose=False,
        )
    else:
        format_string = (
            "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
            "<cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>"
        )
        logger.add(
            sys.stderr,
            format=format_string,
            level=level,
            colorize=True,
            backtrace=True,
            diagnose=False,
        )

    if settings.log_file:
        logger.add(
            settings.log_file,
            rotation="1 day",
            retention="30 days",
            compression="zip",
            level=level,
            serialize=(log_format == "json"),
        )

    logger.debug("Logging configured")
    return logger


def get_logger(name: str):
    """Get a logger instance with a specific name."""
    return logger.bind(name=name)
