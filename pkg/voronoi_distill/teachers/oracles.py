from abc import abstractmethod

import numpy as np

from voronoi_distill.core.base import Policy
from voronoi_distill.envs import mountaincar, simplegoal
from voronoi_distill.envs.base import EnvSpec
from voronoi_distill.utils.constants import OracleTag
from voronoi_distill.utils.utils import as_vector


class ScriptedOracle(Policy):
    def __init__(self, spec: EnvSpec):
        self.spec = spec

    @abstractmethod
    def raw_action(self, state: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def act(self, state) -> np.ndarray:
        state = as_vector(state, self.spec.state_dim)
        return self.spec.clip_action(self.raw_action(state))


class SimpleGoalPotentialField(ScriptedOracle):
    """
    Unit-length pull toward the goal centre. Inside ``cutoff`` of the pitfall
    centre a push of magnitude ``gain * (1/r - 1/cutoff) / r`` is added twice:
    once radially outward and once tangentially, on the side facing the goal.
    """

    def __init__(self, gain: float = 0.15, cutoff: float = 0.35):
        super().__init__(simplegoal.SPEC)
        self.gain = gain
        self.cutoff = cutoff

    def attraction(self, state: np.ndarray) -> np.ndarray:
        to_goal = simplegoal.GOAL_CENTER - state
        distance = np.linalg.norm(to_goal)
        if distance == 0.0:
            return np.zeros(2)
        return to_goal / distance

    def raw_action(self, state: np.ndarray) -> np.ndarray:
        attraction = self.attraction(state)
        offset = state - simplegoal.PITFALL_CENTER
        rho = np.linalg.norm(offset)
        if rho >= self.cutoff or rho == 0.0:
            return attraction

        radial = offset / rho
        tangent = np.array([-radial[1], radial[0]])
        if tangent @ attraction < 0.0:
            tangent = -tangent
        magnitude = self.gain * (1.0 / rho - 1.0 / self.cutoff) / rho
        return attraction + magnitude * (radial + tangent)


class MountainCarEnergy(ScriptedOracle):
    """Full force along the current velocity (energy pumping); zero velocity pushes toward the goal."""

    def __init__(self):
        super().__init__(mountaincar.SPEC)

    def raw_action(self, state: np.ndarray) -> np.ndarray:
        return np.array([1.0 if state[1] >= 0.0 else -1.0])


ORACLES = {
    OracleTag.SIMPLEGOAL_POTENTIAL_FIELD: SimpleGoalPotentialField,
    OracleTag.MOUNTAINCAR_ENERGY: MountainCarEnergy,
}
