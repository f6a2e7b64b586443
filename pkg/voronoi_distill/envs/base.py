from abc import abstractmethod
from dataclasses import dataclass, field

import numpy as np

from voronoi_distill.core.base import Environment
from voronoi_distill.utils.exceptions import DimensionError
from voronoi_distill.utils.utils import as_vector


@dataclass(frozen=True, eq=False)
class EnvSpec:
    """Shapes, bounds and horizon of an environment."""

    name: str
    state_low: np.ndarray
    state_high: np.ndarray
    action_low: np.ndarray
    action_high: np.ndarray
    t_max: int
    state_labels: tuple = field(default=())
    action_labels: tuple = field(default=())

    def __post_init__(self):
        for attr in ("state_low", "state_high", "action_low", "action_high"):
            object.__setattr__(self, attr, np.array(getattr(self, attr), dtype=float).reshape(-1))
        if self.state_low.shape != self.state_high.shape:
            raise DimensionError("state bounds differ in dimension")
        if self.action_low.shape != self.action_high.shape:
            raise DimensionError("action bounds differ in dimension")
        if np.any(self.state_low > self.state_high) or np.any(self.action_low > self.action_high):
            raise ValueError(f"{self.name}: bounds must satisfy low <= high")
        if self.t_max < 1:
            raise ValueError(f"{self.name}: t_max must be positive")
        if not self.state_labels:
            object.__setattr__(self, "state_labels", tuple(f"s{i}" for i in range(self.state_dim)))
        if not self.action_labels:
            object.__setattr__(self, "action_labels", tuple(f"a{i}" for i in range(self.action_dim)))

    @property
    def state_dim(self) -> int:
        return self.state_low.shape[0]

    @property
    def action_dim(self) -> int:
        return self.action_low.shape[0]

    def clip_action(self, action) -> np.ndarray:
        action = as_vector(action, self.action_dim, name="action")
        return np.clip(action, self.action_low, self.action_high)


@dataclass(frozen=True)
class StepResult:
    next_state: np.ndarray
    reward: float
    terminated: bool
    truncated: bool


class EpisodicEnvironment(Environment):
    """
    Stateful wrapper around a pure ``(state, action, t) -> StepResult`` transition.

    Each instance runs one episode at a time; use one instance per rollout.
    """

    def __init__(self):
        self.state = None
        self.t = 0

    @property
    @abstractmethod
    def spec(self) -> EnvSpec:
        pass

    @abstractmethod
    def sample_start(self, rng: np.random.Generator) -> np.ndarray:
        pass

    @abstractmethod
    def transition(self, state: np.ndarray, action: np.ndarray, t: int) -> StepResult:
        pass

    def reset(self, rng: np.random.Generator) -> np.ndarray:
        self.state = self.sample_start(rng)
        self.t = 0
        return self.state.copy()

    def step(self, action) -> StepResult:
        if self.state is None:
            raise RuntimeError(f"{self.spec.name}: step() called before reset()")
        action = as_vector(action, self.spec.action_dim, name="action")
        result = self.transition(self.state, action, self.t)
        self.state = result.next_state
        self.t += 1
        return result


def truncated_at(t: int, t_max: int, terminated: bool) -> bool:
    """Whether executing step ``t`` (0-based) exhausts the horizon."""
    return not terminated and t + 1 >= t_max
