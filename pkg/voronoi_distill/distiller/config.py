import hashlib
import json
from dataclasses import asdict, dataclass, fields, replace
from typing import Mapping

from voronoi_distill.policies.linear import AdamSettings
from voronoi_distill.utils.constants import ENV_HYPERPARAMETERS, ENV_TRAINING, FreezeMode
from voronoi_distill.utils.exceptions import ConfigError


@dataclass(frozen=True)
class DistillConfig:
    """
    Hyperparameters of one distillation run.

    The first nine fields shape the partition and default to the SimpleGoal
    values; :meth:`for_environment` picks the values of another environment.
    ``min_steps`` is the per-epoch Adam step floor of every non-empty cell.
    """

    n_epochs: int = 5000
    n_split: int = 20
    n_merge: int = 100
    n_freeze: int = 1000
    n_reset: int = 500
    min_param_distance: float = 0.5
    min_pol_distance: float = 0.3
    max_pol_loss: float = 1e-4
    one_split: bool = False

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    batch_size: int = 64
    max_steps: int = 32
    min_steps: int = 32

    seed: int = 0
    freeze_mode: str = FreezeMode.TEXT.value
    reset_enabled: bool = True
    split_reset_self: bool = True
    split_enabled: bool = True
    merge_enabled: bool = True
    max_codewords: int = 512

    @classmethod
    def for_environment(cls, name: str, **overrides) -> "DistillConfig":
        from voronoi_distill.envs import env_name

        key = env_name(name)
        return cls.from_mapping({**ENV_HYPERPARAMETERS[key], **ENV_TRAINING[key], **overrides})

    @classmethod
    def from_mapping(cls, mapping: Mapping, base: "DistillConfig" = None) -> "DistillConfig":
        """Overlays ``mapping`` on ``base``; unknown keys and ill-typed values raise ConfigError."""
        base = base or cls()
        types = {f.name: f.type for f in fields(cls)}
        values = {}
        for key, value in mapping.items():
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}", key=key)
            values[key] = _coerce(key, value, types[key])
        config = replace(base, **values)
        config.validate()
        return config

    def validate(self):
        for key in (
            "n_epochs", "n_split", "n_merge", "n_reset", "batch_size", "max_steps", "min_steps", "max_codewords"
        ):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be a positive integer", key=key)
        if self.min_steps > self.max_steps:
            raise ConfigError("min_steps must not exceed max_steps", key="min_steps")
        if not 0 <= self.n_freeze < self.n_epochs:
            raise ConfigError("n_freeze must satisfy 0 <= n_freeze < n_epochs", key="n_freeze")
        for key in ("min_param_distance", "min_pol_distance", "max_pol_loss", "lr", "eps"):
            if not getattr(self, key) > 0:
                raise ConfigError(f"{key} must be > 0", key=key)
        for key in ("beta1", "beta2"):
            if not 0 <= getattr(self, key) < 1:
                raise ConfigError(f"{key} must lie in [0, 1)", key=key)
        try:
            FreezeMode(self.freeze_mode)
        except ValueError:
            raise ConfigError(
                f"freeze_mode must be one of {[m.value for m in FreezeMode]}", key="freeze_mode"
            )

    @property
    def adam(self) -> AdamSettings:
        return AdamSettings(self.lr, self.beta1, self.beta2, self.eps)

    def editable(self, epoch: int) -> bool:
        """Whether the partition may change during ``epoch`` (0-based)."""
        if FreezeMode(self.freeze_mode) is FreezeMode.LITERAL:
            return epoch < self.n_freeze
        return epoch < self.n_epochs - self.n_freeze

    def to_dict(self) -> dict:
        return asdict(self)

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _coerce(key: str, value, kind):
    kind = {"int": int, "float": float, "bool": bool, "str": str}.get(kind, kind)
    if kind is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false"):
            return value.lower() == "true"
        raise ConfigError(f"{key} must be a boolean, got {value!r}", key=key)
    if kind is int:
        try:
            number = float(value)
        except (TypeError, ValueError):
            number = None
        if isinstance(value, bool) or number is None or not number.is_integer():
            raise ConfigError(f"{key} must be an integer, got {value!r}", key=key)
        return int(number)
    if kind is float:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"{key} must be a number, got {value!r}", key=key)
    return str(value)

