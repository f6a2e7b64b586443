"""
SimpleGoal: a point in the unit square moves toward a goal corner while
avoiding a square pitfall in the middle.

Reward is ten times the progress toward the goal centre, plus 10 and
termination on reaching the goal, or -10 and termination in the pitfall.
"""
import numpy as np

from voronoi_distill.envs.base import EnvSpec, EpisodicEnvironment, StepResult, truncated_at
from voronoi_distill.utils.constants import EnvName

GOAL_CENTER = np.array([0.05, 0.05])
GOAL_HIGH = 0.1
PITFALL_LOW = 0.4
PITFALL_HIGH = 0.6
PITFALL_CENTER = np.array([0.5, 0.5])
STEP_SCALE = 0.1
PROGRESS_SCALE = 10.0
GOAL_BONUS = 10.0
PITFALL_PENALTY = -10.0
T_MAX = 50

SPEC = EnvSpec(
    name=EnvName.SIMPLEGOAL.value,
    state_low=[0.0, 0.0],
    state_high=[1.0, 1.0],
    action_low=[-1.0, -1.0],
    action_high=[1.0, 1.0],
    t_max=T_MAX,
    state_labels=("x", "y"),
    action_labels=("dx", "dy"),
)


def in_goal(state) -> bool:
    return bool(state[0] < GOAL_HIGH and state[1] < GOAL_HIGH)


def in_pitfall(state) -> bool:
    return bool(
        PITFALL_LOW < state[0] < PITFALL_HIGH and PITFALL_LOW < state[1] < PITFALL_HIGH
    )


def goal_distance(state) -> float:
    return float(np.linalg.norm(np.asarray(state, dtype=float) - GOAL_CENTER))


def simplegoal_reset(rng: np.random.Generator) -> np.ndarray:
    """Uniform start in the unit square, resampled until outside goal and pitfall."""
    while True:
        state = rng.uniform(0.0, 1.0, size=2)
        if not in_goal(state) and not in_pitfall(state):
            return state


def simplegoal_step(state, action, t: int = 0) -> StepResult:
    state = np.asarray(state, dtype=float)
    action = SPEC.clip_action(action)
    next_state = np.clip(state + STEP_SCALE * action, SPEC.state_low, SPEC.state_high)

    reward = PROGRESS_SCALE * (goal_distance(state) - goal_distance(next_state))
    terminated = False
    if in_goal(next_state):
        reward += GOAL_BONUS
        terminated = True
    elif in_pitfall(next_state):
        reward += PITFALL_PENALTY
        terminated = True
    return StepResult(next_state, float(reward), terminated, truncated_at(t, T_MAX, terminated))


class SimpleGoalEnv(EpisodicEnvironment):
    @property
    def spec(self) -> EnvSpec:
        return SPEC

    def sample_start(self, rng: np.random.Generator) -> np.ndarray:
        return simplegoal_reset(rng)

    def transition(self, state, action, t) -> StepResult:
        return simplegoal_step(state, action, t)
