"""
Utils Module

This module contains utility functions for the application,
including logging setup and parsing of exact fractions from the command line.
"""

import argparse
import logging
import os
from datetime import datetime
from fractions import Fraction

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(log_dir: str = "logs", level: str = "INFO", log_to_file: bool = True) -> logging.Logger:
    """
    Set up logging configuration for the application.

    Args:
        log_dir (str): Directory to store log files
        level (str): Logging level name
        log_to_file (bool): Whether to add a timestamped log file next to the console output

    Returns:
        logging.Logger: Configured logger object
    """
    handlers = [logging.StreamHandler()]  # console output goes to stderr, reports to stdout
    log_filename = None
    if log_to_file:
        # Create logs directory if it doesn't exist
        if not os.path.exists(log_dir):
            os.makedirs(log_dir)

        # Create a unique log filename with timestamp
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        log_filename = os.path.join(log_dir, f"potts_tree_{timestamp}.log")
        handlers.append(logging.FileHandler(log_filename, encoding='utf-8'))

    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT, handlers=handlers, force=True)

    logger = logging.getLogger("potts_tree")
    if log_filename:
        logger.info(f"Logging initialized. Log file: {log_filename}")
    return logger


def parse_fraction(text: str) -> Fraction:
    """
    Parse an exact fraction given as "p/q" or an integer.

    Args:
        text (str): Fraction text, e.g. "-3/2"

    Returns:
        Fraction: The parsed value

    Raises:
        argparse.ArgumentTypeError: If the text is not an exact fraction
    """
    if any(marker in text for marker in ('.', 'e', 'E')):
        raise argparse.ArgumentTypeError(f"'{text}' is not an exact fraction; write it as p/q")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"'{text}' is not an exact fraction; write it as p/q or an integer")


def parse_spin_list(text: str) -> tuple[int, ...]:
    """
    Parse a comma-separated list of spins such as "1,2,3".

    Raises:
        argparse.ArgumentTypeError: If an entry is not an integer
    """
    try:
        return tuple(int(token) for token in text.split(',') if token.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"'{text}' is not a comma-separated list of spins")
