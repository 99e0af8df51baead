"""
Helper functions for logging, timing, thread configuration and flag parsing.
"""

import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from pendulum import DateTime, now

from .errors import ConfigurationError, ContractViolation

logger = logging.getLogger(__name__)

THREADS_ENV = "BONNET_THREADS"


def setup_logging(verbose: bool = False, log_file: Optional[Path] = None):
    """
    Setup logging configuration.

    Args:
        verbose: Enable verbose logging
        log_file: Optional log file path
    """
    level = logging.DEBUG if verbose else logging.INFO

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    # stderr keeps stdout free for tables and JSON
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)

    handlers = [console_handler]
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    logging.basicConfig(
        level=level,
        handlers=handlers,
        force=True
    )

    logger.info(f"Logging setup complete (level: {logging.getLevelName(level)})")


def resolve_threads(threads: Optional[int] = None) -> int:
    """
    Worker-thread count: explicit value, else BONNET_THREADS, else min(4, cpu_count).

    Args:
        threads: Explicit thread count

    Returns:
        Positive thread count
    """
    if threads is None:
        raw = os.environ.get(THREADS_ENV)
        if raw is None or raw.strip() == "":
            return min(4, os.cpu_count() or 1)
        try:
            threads = int(raw)
        except ValueError as e:
            raise ConfigurationError(f"{THREADS_ENV} must be a positive integer, got '{raw}'") from e
    if threads < 1:
        raise ConfigurationError(f"Thread count must be positive, got {threads}")
    return threads


def parse_float_list(text: Optional[str]) -> Optional[List[float]]:
    """
    Parse a comma-separated list of reals ("0.5,1.0").

    Args:
        text: Raw flag value or None

    Returns:
        List of floats, or None when text is None
    """
    if text is None:
        return None
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ContractViolation(f"Expected comma-separated numbers, got '{text}'") from e
    if not values:
        raise ContractViolation("Empty number list")
    return values


def parse_int_list(text: Optional[str]) -> Optional[List[int]]:
    """Parse a comma-separated list of integers ("1,2,3")."""
    if text is None:
        return None
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ContractViolation(f"Expected comma-separated integers, got '{text}'") from e
    if not values:
        raise ContractViolation("Empty integer list")
    return values


def format_duration(seconds: float) -> str:
    """
    Format duration in seconds to human-readable string.

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted duration string
    """
    if seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        minutes = seconds / 60
        return f"{minutes:.1f}m"
    else:
        hours = seconds / 3600
        return f"{hours:.1f}h"


def elapsed_since(start: DateTime) -> str:
    """Wall-clock time since start, formatted for the console."""
    return format_duration((now() - start).total_seconds())
