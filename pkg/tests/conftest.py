import os

os.environ.setdefault("VDISTILL_LOG_FILE", "-")
os.environ.setdefault("VDISTILL_LOG_LEVEL", "WARNING")

import hypothesis
import numpy as np
import pytest

from voronoi_distill.core.base import Policy
from voronoi_distill.distiller import DistillConfig
from voronoi_distill.envs import SimpleGoalEnv
from voronoi_distill.envs.base import EnvSpec, EpisodicEnvironment, StepResult

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("debugger", report_multiple_bugs=False)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


class LinearTeacher(Policy):
    """Exact linear map, used wherever a teacher with a known answer is needed."""

    def __init__(self, weights, bias):
        self.weights = np.asarray(weights, dtype=float)
        self.bias = np.asarray(bias, dtype=float)

    def act(self, state):
        return self.weights @ np.asarray(state, dtype=float) + self.bias


class ConstantPolicy(Policy):
    def __init__(self, action):
        self.action = np.asarray(action, dtype=float)

    def act(self, state):
        return self.action.copy()


ZERO_SPEC = EnvSpec("zero-v0", [0.0], [1.0], [-1.0], [1.0], t_max=5)


class ZeroRewardEnv(EpisodicEnvironment):
    """1-D walk that never pays anything; five steps per episode."""

    @property
    def spec(self):
        return ZERO_SPEC

    def sample_start(self, rng):
        return np.array([rng.uniform()])

    def transition(self, state, action, t):
        next_state = np.clip(state + 0.1 * action, 0.0, 1.0)
        return StepResult(next_state, 0.0, False, t + 1 >= ZERO_SPEC.t_max)


class PayingEnv(ZeroRewardEnv):
    """ZeroRewardEnv paying ``rate`` times the state each step; needs its constructor argument."""

    def __init__(self, rate: float):
        super().__init__()
        self.rate = rate

    def transition(self, state, action, t):
        result = super().transition(state, action, t)
        return StepResult(result.next_state, self.rate * float(state[0]), False, result.truncated)


INSTANT_SPEC = EnvSpec("instant-v0", [0.0, 0.0], [1.0, 1.0], [-1.0, -1.0], [1.0, 1.0], t_max=50)


class InstantEnv(EpisodicEnvironment):
    """Terminates on the first step."""

    @property
    def spec(self):
        return INSTANT_SPEC

    def sample_start(self, rng):
        return rng.uniform(0.0, 1.0, size=2)

    def transition(self, state, action, t):
        return StepResult(state.copy(), 1.0, True, False)


# Stays within the action bounds on the unit square, so clipping never binds.
SIMPLEGOAL_LINEAR_WEIGHTS = [[-0.5, 0.2], [0.1, -0.4]]
SIMPLEGOAL_LINEAR_BIAS = [0.1, 0.05]


@pytest.fixture
def simplegoal_env():
    return SimpleGoalEnv()


@pytest.fixture
def linear_teacher():
    return LinearTeacher(SIMPLEGOAL_LINEAR_WEIGHTS, SIMPLEGOAL_LINEAR_BIAS)


@pytest.fixture
def short_config():
    """A SimpleGoal run short enough for unit tests but with every phase present."""
    return DistillConfig.for_environment(
        "simplegoal-v0",
        n_epochs=60,
        n_split=5,
        n_merge=10,
        n_freeze=15,
        n_reset=20,
        seed=3,
    )
