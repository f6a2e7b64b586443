import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from voronoi_distill.core.base import Policy
from voronoi_distill.utils.exceptions import DimensionError
from voronoi_distill.utils.utils import as_vector

INIT_WEIGHT_RANGE = 0.1


@dataclass(eq=False)
class LinearPolicy(Policy):
    """
    One cell's subpolicy: ``action = weights @ state + bias``.

    Attributes:
        weights: (action_dim, state_dim) matrix; row ``r`` drives action component ``r``.
        bias: offset per action component.
    """

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weights = np.array(self.weights, dtype=float, ndmin=2)
        self.bias = np.array(self.bias, dtype=float).reshape(-1)
        if self.weights.ndim != 2 or self.weights.shape[0] != self.bias.shape[0]:
            raise DimensionError(
                f"weights {self.weights.shape} do not match bias {self.bias.shape}"
            )
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.bias))):
            raise ValueError("linear policy parameters must be finite")

    @property
    def state_dim(self) -> int:
        return self.weights.shape[1]

    @property
    def action_dim(self) -> int:
        return self.weights.shape[0]

    @classmethod
    def init_random(cls, state_dim: int, action_dim: int, rng: np.random.Generator):
        """Weights i.i.d. uniform on [-0.1, 0.1], zero bias."""
        if state_dim < 1 or action_dim < 1:
            raise DimensionError("policy dimensions must be at least 1")
        weights = rng.uniform(
            -INIT_WEIGHT_RANGE, INIT_WEIGHT_RANGE, size=(action_dim, state_dim)
        )
        return cls(weights, np.zeros(action_dim))

    @classmethod
    def zeros(cls, state_dim: int, action_dim: int):
        return cls(np.zeros((action_dim, state_dim)), np.zeros(action_dim))

    def predict(self, state) -> np.ndarray:
        state = as_vector(state, self.state_dim)
        return self.weights @ state + self.bias

    def predict_many(self, states) -> np.ndarray:
        states = np.asarray(states, dtype=float).reshape(-1, self.state_dim)
        return states @ self.weights.T + self.bias

    def act(self, state) -> np.ndarray:
        return self.predict(state)

    def copy(self) -> "LinearPolicy":
        return LinearPolicy(self.weights.copy(), self.bias.copy())

    def parameters(self) -> np.ndarray:
        return np.concatenate([self.weights.ravel(), self.bias])

    def to_dict(self) -> dict:
        return {"weights": self.weights.tolist(), "bias": self.bias.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "LinearPolicy":
        return cls(data["weights"], data["bias"])


def param_distance(p: LinearPolicy, q: LinearPolicy) -> float:
    """L-infinity distance between the parameter sets of two subpolicies."""
    if p.weights.shape != q.weights.shape or p.bias.shape != q.bias.shape:
        raise DimensionError(
            f"cannot compare policies of shapes {p.weights.shape} and {q.weights.shape}"
        )
    return float(np.max(np.abs(p.parameters() - q.parameters())))


def mse(predicted, target) -> float:
    predicted = np.asarray(predicted, dtype=float)
    target = np.asarray(target, dtype=float)
    return float(np.mean((predicted - target) ** 2))


@dataclass
class ExperienceBuffer:
    """(state, teacher action) pairs routed to one cell. Unbounded until reset."""

    states: list = field(default_factory=list)
    actions: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.states)

    def add(self, state, action):
        self.states.append(np.array(state, dtype=float))
        self.actions.append(np.array(action, dtype=float))

    def reset(self):
        self.states.clear()
        self.actions.clear()

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.vstack(self.states), np.vstack(self.actions)


@dataclass
class OptimizerState:
    """Adam moment accumulators for one LinearPolicy."""

    m_weights: np.ndarray
    v_weights: np.ndarray
    m_bias: np.ndarray
    v_bias: np.ndarray
    step: int = 0

    @classmethod
    def for_policy(cls, policy: LinearPolicy) -> "OptimizerState":
        return cls(
            np.zeros_like(policy.weights),
            np.zeros_like(policy.weights),
            np.zeros_like(policy.bias),
            np.zeros_like(policy.bias),
        )

    def reset(self):
        for moment in (self.m_weights, self.v_weights, self.m_bias, self.v_bias):
            moment.fill(0.0)
        self.step = 0


@dataclass(frozen=True)
class AdamSettings:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def adam_step(
    policy: LinearPolicy,
    opt: OptimizerState,
    states: np.ndarray,
    actions: np.ndarray,
    settings: AdamSettings = AdamSettings(),
) -> float:
    """One Adam update on a batch; returns the batch loss before the update."""
    residual = policy.predict_many(states) - actions
    loss = float(np.mean(residual**2))
    scale = 2.0 / residual.size
    grad_weights = scale * residual.T @ states
    grad_bias = scale * residual.sum(axis=0)

    opt.step += 1
    b1, b2 = settings.beta1, settings.beta2
    correction1 = 1.0 - b1**opt.step
    correction2 = 1.0 - b2**opt.step
    for param, grad, m, v in (
        (policy.weights, grad_weights, opt.m_weights, opt.v_weights),
        (policy.bias, grad_bias, opt.m_bias, opt.v_bias),
    ):
        m *= b1
        m += (1.0 - b1) * grad
        v *= b2
        v += (1.0 - b2) * grad**2
        param -= settings.lr * (m / correction1) / (np.sqrt(v / correction2) + settings.eps)
    return loss


def train_epoch(
    policy: LinearPolicy,
    opt: OptimizerState,
    buffer: ExperienceBuffer,
    lr: float,
    batch_size: int,
    max_steps: int,
    rng: np.random.Generator,
    settings: AdamSettings = None,
    min_steps: int = 1,
) -> Optional[float]:
    """Fits ``policy`` to its buffer with mini-batch Adam.

    Performs ``min(ceil(len(buffer) / batch_size), max_steps)`` steps, each on a
    batch drawn without replacement. ``min_steps`` raises the lower end of that
    count, so a small buffer is revisited several times within one call.

    Returns:
        Mean batch MSE, or ``None`` when the buffer is empty (nothing is changed).
    """
    if not len(buffer):
        return None
    settings = replace(settings or AdamSettings(), lr=lr)

    states, actions = buffer.as_arrays()
    n = len(states)
    n_steps = min(max(math.ceil(n / batch_size), min_steps), max_steps)
    losses = []
    for _ in range(n_steps):
        batch = rng.choice(n, size=min(batch_size, n), replace=False)
        losses.append(adam_step(policy, opt, states[batch], actions[batch], settings))
    return float(np.mean(losses))
