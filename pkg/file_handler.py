"""
File Handler Module

This module handles everything that touches the filesystem: reading ball
and finite configurations from JSON, and writing the JSON reports and CSV
grids the command-line interface produces.
"""

import json
import logging
import os
import sys
from fractions import Fraction
from typing import Optional

import pandas as pd

from ground import extend_periodic
from group import GroupWord
from model import Background, BallConfig, ConstantBackground, FiniteConfiguration

logger = logging.getLogger(__name__)


def _ensure_parent(output_file: str) -> None:
    # Create directory if it doesn't exist
    os.makedirs(os.path.dirname(output_file) if os.path.dirname(output_file) else '.', exist_ok=True)


def dump_json(data: object) -> str:
    """
    Serialize a report deterministically.

    Args:
        data (dict): JSON-compatible report

    Returns:
        str: Indented JSON text ending in a newline
    """
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def write_json(data: object, output_file: Optional[str] = None) -> None:
    """
    Write a report to a file, or to stdout when no file is given.

    Args:
        data (dict): JSON-compatible report
        output_file (str, optional): Destination path
    """
    text = dump_json(data)
    if not output_file:
        sys.stdout.write(text)
        return
    _ensure_parent(output_file)
    with open(output_file, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    logger.info(f"Saved JSON report to {output_file}")


def write_grid_csv(rows: list[tuple[Fraction, Fraction, str]], output_file: Optional[str] = None) -> None:
    """
    Write phase-diagram grid rows (j1, j2, minimizer_orbit_id) as CSV.

    Coordinates are written as floats for plotting tools; the labels were
    computed from the exact values.

    Args:
        rows (list): (j1, j2, label) tuples with Fraction coordinates
        output_file (str, optional): Destination path, stdout when omitted
    """
    df = pd.DataFrame(
        [(float(j1), float(j2), label) for j1, j2, label in rows],
        columns=['j1', 'j2', 'minimizer_orbit_id'],
    )
    if not output_file:
        df.to_csv(sys.stdout, index=False, lineterminator='\n')
        return
    _ensure_parent(output_file)
    df.to_csv(output_file, index=False, encoding='utf-8', lineterminator='\n')
    logger.info(f"Saved {len(df)} grid rows to {output_file}")


def ball_config_from_dict(data: dict) -> BallConfig:
    """
    Build a ball configuration from {"k": int, "center": int, "leaves": [int, ...]}.

    Raises:
        ValueError: If the leaf count does not match k
    """
    ball = BallConfig(int(data['center']), tuple(int(leaf) for leaf in data['leaves']))
    if 'k' in data and int(data['k']) != ball.k:
        raise ValueError(f"Ball declares k={data['k']} but has {len(ball.leaves)} leaves")
    return ball


def parse_background(text: str, k: int) -> Background:
    """
    Parse "const:<spin>" or "periodic:<center>;<leaf spins>".

    A periodic background is the periodic continuation of the given ball,
    e.g. "periodic:1;1 2 3" for k = 2.
    """
    kind, _, body = text.partition(':')
    if kind == 'const':
        return ConstantBackground(int(body))
    if kind == 'periodic':
        center, _, leaves = body.partition(';')
        ball = BallConfig(int(center), tuple(int(leaf) for leaf in leaves.split()))
        if ball.k != k:
            raise ValueError(f"Periodic background '{text}' has {len(ball.leaves)} leaves, expected {k + 1}")
        return extend_periodic(ball)
    raise ValueError(f"Unknown background '{text}': expected const:<spin> or periodic:<center>;<leaves>")


def finite_configuration_from_dict(data: dict, k: Optional[int] = None) -> FiniteConfiguration:
    """
    Build a finite configuration from its JSON form.

    Args:
        data (dict): {"background": ..., "overrides": [{"word": "1 2", "spin": 3}, ...]}
            with an optional "k"
        k (int, optional): Tree order when the JSON does not carry one

    Returns:
        FiniteConfiguration: The configuration
    """
    k = int(data.get('k', k)) if data.get('k', k) is not None else None
    if k is None:
        raise ValueError("Tree order k missing from configuration and command line")
    background = parse_background(data['background'], k)
    overrides = {}
    for entry in data.get('overrides', []):
        overrides[GroupWord.parse(entry['word'])] = int(entry['spin'])
    return FiniteConfiguration(k, background, overrides)


def load_finite_configuration(path: str, k: Optional[int] = None) -> FiniteConfiguration:
    """
    Load a finite configuration from a JSON file.

    Args:
        path (str): Path to the JSON file
        k (int, optional): Tree order when the file does not carry one

    Returns:
        FiniteConfiguration: The configuration
    """
    logger.info(f"Loading configuration from {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error reading configuration {path}: {str(e)}")
        raise ValueError(f"Cannot read configuration {path}: {e}") from e
    return finite_configuration_from_dict(data, k)
