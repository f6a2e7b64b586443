from voronoi_distill.envs.base import EnvSpec, EpisodicEnvironment, StepResult
from voronoi_distill.envs.mountaincar import MountainCarEnv, mountaincar_reset, mountaincar_step
from voronoi_distill.envs.simplegoal import SimpleGoalEnv, simplegoal_reset, simplegoal_step
from voronoi_distill.utils.constants import EnvName
from voronoi_distill.utils.exceptions import ConfigError

ENVIRONMENTS = {
    EnvName.SIMPLEGOAL: SimpleGoalEnv,
    EnvName.MOUNTAINCAR: MountainCarEnv,
}


def env_name(name: str) -> EnvName:
    try:
        return EnvName(name.lower())
    except ValueError:
        known = ", ".join(e.value for e in EnvName)
        raise ConfigError(f"unknown environment {name!r} (known: {known})", key="env")


def make_env(name: str) -> EpisodicEnvironment:
    return ENVIRONMENTS[env_name(name)]()
