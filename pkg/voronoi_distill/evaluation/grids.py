from dataclasses import dataclass
from typing import Union

import numpy as np
import pandas as pd

from voronoi_distill.core.base import Policy
from voronoi_distill.envs.base import EnvSpec
from voronoi_distill.utils.exceptions import DimensionError

CELL_COLUMN = "cell"

Resolution = Union[int, tuple[int, int]]


@dataclass
class PolicyGrid:
    """Policy actions sampled on a uniform grid over the state bounds."""

    resolution: tuple[int, int]
    state_columns: list
    action_columns: list
    frame: pd.DataFrame

    def __len__(self) -> int:
        return len(self.frame)

    @property
    def has_cells(self) -> bool:
        return CELL_COLUMN in self.frame.columns


class QuiverGrid(PolicyGrid):
    pass


class HeatmapGrid(PolicyGrid):
    @property
    def value_column(self) -> str:
        return self.action_columns[0]


def _resolution(resolution: Resolution) -> tuple[int, int]:
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    nx_, ny_ = (int(r) for r in resolution)
    if nx_ < 1 or ny_ < 1:
        raise ValueError("grid resolution must be at least 1 per axis")
    return nx_, ny_


def grid_states(spec: EnvSpec, resolution: Resolution) -> np.ndarray:
    """Row-major grid points, first axis outermost."""
    if spec.state_dim != 2:
        raise DimensionError("visualization requires 2-D state")
    nx_, ny_ = _resolution(resolution)
    xs = np.linspace(spec.state_low[0], spec.state_high[0], nx_)
    ys = np.linspace(spec.state_low[1], spec.state_high[1], ny_)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])


def _sample(policy: Policy, spec: EnvSpec, resolution: Resolution) -> tuple[tuple[int, int], pd.DataFrame]:
    states = grid_states(spec, resolution)
    actions = np.array([policy.act(s) for s in states], dtype=float).reshape(len(states), -1)
    frame = pd.DataFrame(states, columns=list(spec.state_labels))
    for j, label in enumerate(spec.action_labels):
        frame[label] = actions[:, j]
    partition = getattr(policy, "partition", None)
    if partition is not None:
        frame[CELL_COLUMN] = partition.nearest_many(states)
    return _resolution(resolution), frame


def quiver_data(policy: Policy, spec: EnvSpec, resolution: Resolution = 20) -> QuiverGrid:
    """Action vectors at grid states, with the owning cell when ``policy`` is distilled."""
    res, frame = _sample(policy, spec, resolution)
    return QuiverGrid(res, list(spec.state_labels), list(spec.action_labels), frame)


def heatmap_data(policy: Policy, spec: EnvSpec, resolution: Resolution = 50) -> HeatmapGrid:
    """Scalar action (force) at grid states."""
    if spec.action_dim != 1:
        raise DimensionError(f"heatmap requires a scalar action, {spec.name} has {spec.action_dim}")
    res, frame = _sample(policy, spec, resolution)
    return HeatmapGrid(res, list(spec.state_labels), list(spec.action_labels), frame)
