from voronoi_distill.core.base import Policy
from voronoi_distill.envs.base import EnvSpec
from voronoi_distill.teachers.mlp import MlpPolicy, mlp_load
from voronoi_distill.teachers.oracles import (
    ORACLES,
    MountainCarEnergy,
    ScriptedOracle,
    SimpleGoalPotentialField,
)
from voronoi_distill.utils.constants import OracleTag
from voronoi_distill.utils.exceptions import ConfigError


def make_teacher(source: str, spec: EnvSpec) -> Policy:
    """
    Builds the teacher named by ``oracle:<tag>`` or ``file:<path>`` for ``spec``.

    Raises:
        ConfigError: unknown source kind or oracle tag, or a teacher whose
            dimensions do not fit the environment.
    """
    kind, _, value = source.partition(":")
    if kind == "oracle":
        try:
            oracle = ORACLES[OracleTag(value)]()
        except ValueError:
            known = ", ".join(tag.value for tag in OracleTag)
            raise ConfigError(f"unknown oracle {value!r} (known: {known})", key="teacher")
        if oracle.spec.name != spec.name:
            raise ConfigError(
                f"oracle {value!r} drives {oracle.spec.name}, not {spec.name}", key="teacher"
            )
        return oracle
    if kind == "file":
        teacher = mlp_load(value, spec.action_low, spec.action_high)
        if teacher.state_dim != spec.state_dim:
            raise ConfigError(
                f"teacher expects {teacher.state_dim}-D states, {spec.name} has {spec.state_dim}",
                key="teacher",
            )
        return teacher
    raise ConfigError(
        f"teacher source {source!r} must look like oracle:<tag> or file:<path>", key="teacher"
    )
