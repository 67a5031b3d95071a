"""
Logging utility functions.
"""
import sys

from loguru import logger

from src.config import Config

LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}"


def setup_logger(name: str, level: str = None, to_file: bool = True):
    """
    Set up loguru with a console sink and, optionally, a rotating file sink.

    Args:
        name: Name of the log file (without extension)
        level: Console level; defaults to the configured level
        to_file: Whether to also write ``LOG_DIR/<name>.log``

    Returns:
        The configured loguru logger
    """
    config = Config()
    level = level or config.log_level

    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level=level)

    if to_file:
        config.log_dir.mkdir(parents=True, exist_ok=True)
        logger.add(
            config.log_dir / f"{name}.log",
            rotation="10 MB",
            retention=5,
            encoding="utf-8",
            format=LOG_FORMAT,
            level="DEBUG",
        )

    return logger
