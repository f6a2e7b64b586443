import os
from dataclasses import dataclass, field
from typing import Any, Mapping

from voronoi_distill.utils.constants import DEFAULT_ORACLE, EnvName
from voronoi_distill.utils.exceptions import ConfigError
from voronoi_distill.utils.utils import read_json

RUN_KEYS = ("env", "teacher", "episodes", "out", "seed", "n_workers")


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"environment variable {name} must be an integer, got {value!r}", key=name)


@dataclass
class RunConfig:
    """
    Configuration of one CLI run. Defaults come from environment variables
    (``VDISTILL_OUT_DIR``, ``VDISTILL_SEED``, ``VDISTILL_WORKERS``), loaded
    from a ``.env`` file at CLI start.
    """

    env: str = EnvName.SIMPLEGOAL.value
    teacher: str = ""
    episodes: int = 1000
    out: str = field(default_factory=lambda: os.getenv("VDISTILL_OUT_DIR", "output"))
    seed: int = field(default_factory=lambda: _env_int("VDISTILL_SEED", 0))
    n_workers: int = field(default_factory=lambda: _env_int("VDISTILL_WORKERS", 1))
    distill: dict = field(default_factory=dict)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "RunConfig":
        """Run keys go to the run, every other key to the distillation config."""
        if not isinstance(data, Mapping):
            raise ConfigError("config file must hold a JSON object")
        config = cls()
        for key, value in data.items():
            if key in RUN_KEYS:
                setattr(config, key, value)
            else:
                config.distill[key] = value
        return config

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            data = read_json(path)
        except ValueError as e:
            raise ConfigError(f"{path}: not valid JSON ({e})", key="config")
        return cls.from_mapping(data)

    def override(self, **values) -> "RunConfig":
        """Applies CLI flags; ``None`` means the flag was not given."""
        for key, value in values.items():
            if value is None:
                continue
            if key in RUN_KEYS:
                setattr(self, key, value)
            else:
                self.distill[key] = value
        return self

    def teacher_source(self) -> str:
        if self.teacher:
            return self.teacher
        from voronoi_distill.envs import env_name

        return f"oracle:{DEFAULT_ORACLE[env_name(self.env)].value}"
