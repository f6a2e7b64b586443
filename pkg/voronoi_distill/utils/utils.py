import json
import logging
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from voronoi_distill.utils.exceptions import DimensionError

DEFAULT_LOG_FILE = "voronoi_distill.log"


def setup_logger(log_filename: str = None, logger_name: str = None) -> logging.Logger:
    """
    Creates a logger with both file and console handlers

    Args:
        log_filename: Name of the log file to write to. ``VDISTILL_LOG_FILE``
            overrides it; the value ``-`` disables the file handler.
        logger_name: Optional name for the logger, defaults to module name

    Returns:
        Logger instance configured with file and console handlers
    """
    logger = logging.getLogger(logger_name if logger_name else __name__)

    # Prevent duplicate handlers
    if logger.handlers:
        return logger

    logger.setLevel(os.getenv("VDISTILL_LOG_LEVEL", "INFO").upper())
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    log_filename = os.getenv("VDISTILL_LOG_FILE", log_filename or DEFAULT_LOG_FILE)
    if log_filename != "-":
        file_handler = logging.FileHandler(log_filename)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)
    logger.propagate = False

    return logger


def read_json(path: str) -> Any:
    logging.getLogger(__name__).debug(f"Reading JSON file from: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def dump_json(data: Any) -> str:
    """Canonical JSON text: sorted keys, 2-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def ensure_parent(path: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def episode_rng(seed: int, episode: int) -> np.random.Generator:
    """Independent random stream for one evaluation episode."""
    return np.random.default_rng([int(seed), int(episode)])


def as_vector(values: Iterable[float], dim: int = None, name: str = "state") -> np.ndarray:
    """Converts ``values`` to a 1-D float array, checking its length when ``dim`` is given."""
    vector = np.asarray(values, dtype=float).reshape(-1)
    if dim is not None and vector.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {vector.shape[0]}, expected {dim}")
    return vector


def to_list(array: Sequence) -> list:
    return np.asarray(array, dtype=float).tolist()
