"""
Continuous mountain car. Dynamics follow the public reference environment
statement by statement (scalar ``math`` arithmetic, same evaluation order).
"""
import math

import numpy as np

from voronoi_distill.envs.base import EnvSpec, EpisodicEnvironment, StepResult, truncated_at
from voronoi_distill.utils.constants import EnvName

MIN_POSITION = -1.2
MAX_POSITION = 0.6
MAX_SPEED = 0.07
GOAL_POSITION = 0.45
GOAL_VELOCITY = 0.0
POWER = 0.0015
GRAVITY = 0.0025
FORCE_PENALTY = 0.1
GOAL_REWARD = 100.0
T_MAX = 1000

SPEC = EnvSpec(
    name=EnvName.MOUNTAINCAR.value,
    state_low=[MIN_POSITION, -MAX_SPEED],
    state_high=[MAX_POSITION, MAX_SPEED],
    action_low=[-1.0],
    action_high=[1.0],
    t_max=T_MAX,
    state_labels=("x", "v"),
    action_labels=("F",),
)


def mountaincar_reset(rng: np.random.Generator) -> np.ndarray:
    return np.array([rng.uniform(-0.6, -0.4), 0.0])


def mountaincar_step(state, action, t: int = 0) -> StepResult:
    position, velocity = float(state[0]), float(state[1])
    force = min(max(float(np.asarray(action).reshape(-1)[0]), -1.0), 1.0)

    velocity += force * POWER - GRAVITY * math.cos(3 * position)
    velocity = min(max(velocity, -MAX_SPEED), MAX_SPEED)
    position += velocity
    position = min(max(position, MIN_POSITION), MAX_POSITION)
    if position == MIN_POSITION and velocity < 0:
        velocity = 0.0

    # Reference termination rule; x >= 0.45 with v < 0 is unreachable from a valid start.
    terminated = bool(position >= GOAL_POSITION and velocity >= GOAL_VELOCITY)
    reward = (GOAL_REWARD if terminated else 0.0) - math.pow(force, 2) * FORCE_PENALTY
    return StepResult(
        np.array([position, velocity]),
        reward,
        terminated,
        truncated_at(t, T_MAX, terminated),
    )


class MountainCarEnv(EpisodicEnvironment):
    @property
    def spec(self) -> EnvSpec:
        return SPEC

    def sample_start(self, rng: np.random.Generator) -> np.ndarray:
        return mountaincar_reset(rng)

    def transition(self, state, action, t) -> StepResult:
        return mountaincar_step(state, action, t)
