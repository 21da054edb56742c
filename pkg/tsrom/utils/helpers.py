"""Utility functions and helpers"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import numpy as np

from tsrom.errors import InvalidArgumentError

FLOAT_FORMAT = ".17g"


def setup_logging(name: str, level: str = "INFO") -> logging.Logger:
    """
    Setup standard logging for module.

    Args:
        name: Logger name
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level.upper())

    if not logger.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


def format_float(value: float) -> str:
    """
    Format a float with 17 significant digits so it round-trips exactly.

    Args:
        value: Number to format

    Returns:
        Shortest-safe decimal string
    """
    return format(float(value), FLOAT_FORMAT)


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """
    Write rows to a CSV file with a header; floats use 17 significant digits.

    Args:
        path: Destination file
        header: Column names
        rows: Row sequences

    Returns:
        Path that was written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_format_cell(cell) for cell in row])

    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Read a CSV file with a header row into a list of dicts"""
    with open(path, "r", newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


def _format_cell(cell: Any) -> str:
    if isinstance(cell, (bool, np.bool_)):
        return str(bool(cell))
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    if isinstance(cell, (float, np.floating)):
        return format_float(cell)
    return str(cell)


def dump_json(data: Dict, path: Union[str, Path]) -> Path:
    """
    Serialize a dictionary as deterministic UTF-8 JSON.

    Args:
        data: JSON-compatible dictionary
        path: Destination file

    Returns:
        Path that was written
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def is_strictly_increasing(values: Sequence[float]) -> bool:
    """Check that a sequence is strictly increasing"""
    arr = np.asarray(values)
    return bool(arr.size < 2 or np.all(np.diff(arr) > 0))


def is_uniform_grid(grid: Sequence[float], rtol: float = 1e-12) -> bool:
    """
    Check that grid spacing is uniform to within rtol times the mean step.

    Args:
        grid: Strictly increasing parameter values
        rtol: Relative tolerance on each step

    Returns:
        True if every step equals the mean step to within tolerance
    """
    arr = np.asarray(grid, dtype=float)
    if arr.size < 2:
        return False

    delta = (arr[-1] - arr[0]) / (arr.size - 1)
    return bool(np.max(np.abs(np.diff(arr) - delta)) <= rtol * abs(delta))


def validate_positive_int(value: int, name: str) -> int:
    """
    Validate that value is a positive integer.

    Raises:
        ValueError: If value is not a positive integer
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise InvalidArgumentError(f"{name} must be a positive integer, got {value!r}")
    return int(value)
