"""
PolarWiener - Polar Decomposition of the Wiener Measure
Copyright (c) 2025 Jay Wenden
Licensed under CC-BY-NC-SA 4.0
"""
"""
Utility functions and helpers
"""
import logging
import logging.handlers
import math
from pathlib import Path
from typing import Optional, Union

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(
    verbose: bool = False,
    log_file: Optional[str] = None,
    level: str = "INFO",
    max_size_mb: float = 10,
    backup_count: int = 3,
):
    """
    Configure logging for the application.

    Args:
        verbose: Force DEBUG level
        log_file: Optional log file path (rotated)
        level: Level name used when not verbose
        max_size_mb: Rotation size of the log file
        backup_count: Number of rotated files to keep
    """
    log_level = logging.DEBUG if verbose else getattr(logging, str(level).upper(), logging.INFO)

    handlers = [logging.StreamHandler()]
    if log_file:
        try:
            handlers.append(logging.handlers.RotatingFileHandler(
                log_file,
                maxBytes=int(max_size_mb * 1024 * 1024),
                backupCount=backup_count,
            ))
        except OSError as e:
            logger.warning(f"Cannot open log file {log_file}: {e}")

    logging.basicConfig(
        level=log_level,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def ensure_directory(path: Union[str, Path]) -> Path:
    """
    Create a directory (and parents) if needed.

    Args:
        path: Directory path

    Returns:
        The directory as a Path
    """
    directory = Path(path)
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def format_estimate(mean: float, std_err: float) -> str:
    """
    Format a Monte Carlo estimate for log output.

    Args:
        mean: Estimated value
        std_err: Standard error

    Returns:
        String such as "0.149429 ± 0.000312"
    """
    if not math.isfinite(mean):
        return str(mean)
    return f"{mean:.6f} ± {std_err:.6f}"


def format_z(z_score: Optional[float]) -> str:
    """Format a z-score, or 'n/a' when no target exists."""
    if z_score is None:
        return "n/a"
    return f"{z_score:+.2f}"
