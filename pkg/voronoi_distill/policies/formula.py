"""Human-readable rendering of linear subpolicies, e.g. ``-0.148x -0.021y -0.055``."""
import re
from typing import Sequence

import numpy as np

from voronoi_distill.utils.constants import FormulaStyle

DECIMALS = 4
MIN_COMPACT_DECIMALS = 3

_TERM = re.compile(r"([+-]?)(\d+(?:\.\d*)?|\.\d+)([A-Za-z_][A-Za-z0-9_]*)?")


def default_labels(dim: int) -> list[str]:
    return [f"s{i}" for i in range(dim)]


def format_coefficient(value: float, style: FormulaStyle = FormulaStyle.COMPACT) -> str:
    value = round(float(value), DECIMALS)
    if value == 0.0:
        value = 0.0  # drops the sign of -0.0
    text = f"{value:+.{DECIMALS}f}"
    if style is FormulaStyle.COMPACT:
        keep = len(text) - (DECIMALS - MIN_COMPACT_DECIMALS)
        while len(text) > keep and text.endswith("0"):
            text = text[:-1]
    return text


def format_formula(
    weights_row: Sequence[float],
    bias: float,
    labels: Sequence[str],
    style: FormulaStyle = FormulaStyle.COMPACT,
) -> str:
    """
    Renders ``sum(w_j * label_j) + bias`` with signed, space-separated terms.

    Args:
        weights_row: coefficients of one action component
        bias: offset of that component
        labels: one variable name per state dimension
        style: ``COMPACT`` trims trailing zeros down to 3 decimals and omits zero
            weights; ``FIXED`` prints every term with 4 decimals
    """
    if len(weights_row) != len(labels):
        raise ValueError(f"{len(weights_row)} coefficients for {len(labels)} labels")
    terms = []
    for weight, label in zip(weights_row, labels):
        if style is FormulaStyle.COMPACT and round(float(weight), DECIMALS) == 0.0:
            continue
        terms.append(f"{format_coefficient(weight, style)}{label}")
    terms.append(format_coefficient(bias, style))
    return " ".join(terms)


def parse_formula(text: str, labels: Sequence[str]) -> tuple[np.ndarray, float]:
    """Inverse of :func:`format_formula`; also accepts the unspaced ``3.175y-1.000`` form."""
    compact = text.replace("−", "-").replace(" ", "")
    index = {label: i for i, label in enumerate(labels)}
    weights = np.zeros(len(labels))
    bias = 0.0
    position = 0
    while position < len(compact):
        match = _TERM.match(compact, position)
        if match is None or match.end() == position:
            raise ValueError(f"cannot parse formula {text!r} at offset {position}")
        sign, magnitude, label = match.groups()
        value = float(magnitude) * (-1.0 if sign == "-" else 1.0)
        if label is None:
            bias += value
        elif label in index:
            weights[index[label]] += value
        else:
            raise ValueError(f"unknown variable {label!r} in formula {text!r}")
        position = match.end()
    return weights, bias
