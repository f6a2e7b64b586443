import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from voronoi_distill.core.base import Policy
from voronoi_distill.utils.constants import Activation
from voronoi_distill.utils.exceptions import TeacherFormatError
from voronoi_distill.utils.utils import as_vector, dump_json, ensure_parent, setup_logger

logger = setup_logger(logger_name="voronoi_distill.teachers.mlp")

ACTIVATIONS = {
    Activation.RELU: lambda z: np.maximum(z, 0.0),
    Activation.TANH: np.tanh,
    Activation.IDENTITY: lambda z: z,
}


@dataclass(frozen=True, eq=False)
class DenseLayer:
    weights: np.ndarray  # (out_units, in_units)
    bias: np.ndarray
    activation: Activation

    def forward(self, x: np.ndarray) -> np.ndarray:
        return ACTIVATIONS[self.activation](self.weights @ x + self.bias)


class MlpPolicy(Policy):
    """
    Feed-forward teacher network, inference only.

    With ``squash_output`` the network output goes through ``tanh`` and is
    rescaled onto the action bounds (export the final layer with ``identity``
    activation in that case). Outputs are always clipped to the bounds.
    """

    def __init__(
        self,
        layers: Sequence[DenseLayer],
        squash_output: bool,
        state_dim: int,
        action_dim: int,
        action_low=None,
        action_high=None,
    ):
        self.layers = list(layers)
        self.squash_output = bool(squash_output)
        self.state_dim = int(state_dim)
        self.action_dim = int(action_dim)
        if action_low is None:
            action_low = np.full(self.action_dim, -1.0)
        if action_high is None:
            action_high = np.full(self.action_dim, 1.0)
        self.action_low = as_vector(action_low, self.action_dim, "action_low")
        self.action_high = as_vector(action_high, self.action_dim, "action_high")
        self._check_shapes()

    def _check_shapes(self):
        if not self.layers:
            raise TeacherFormatError("network has no layers")
        width = self.state_dim
        for index, layer in enumerate(self.layers):
            if layer.weights.ndim != 2 or layer.bias.shape != (layer.weights.shape[0],):
                raise TeacherFormatError(
                    f"weights {layer.weights.shape} and bias {layer.bias.shape} disagree",
                    layer=index,
                )
            if layer.weights.shape[1] != width:
                raise TeacherFormatError(
                    f"expects {layer.weights.shape[1]} inputs but receives {width}",
                    layer=index,
                )
            width = layer.weights.shape[0]
        if width != self.action_dim:
            raise TeacherFormatError(
                f"outputs {width} units, expected action_dim {self.action_dim}",
                layer=len(self.layers) - 1,
            )

    def act(self, state) -> np.ndarray:
        x = as_vector(state, self.state_dim)
        for layer in self.layers:
            x = layer.forward(x)
        if self.squash_output:
            x = self.action_low + (np.tanh(x) + 1.0) * (self.action_high - self.action_low) / 2.0
        return np.clip(x, self.action_low, self.action_high)

    def to_dict(self) -> dict:
        return {
            "layers": [
                {"w": layer.weights.tolist(), "b": layer.bias.tolist(), "act": layer.activation.value}
                for layer in self.layers
            ],
            "squash_output": self.squash_output,
            "state_dim": self.state_dim,
            "action_dim": self.action_dim,
        }

    def save(self, path: str):
        ensure_parent(path).write_text(dump_json(self.to_dict()), encoding="utf-8")


def mlp_from_dict(data: dict, action_low=None, action_high=None) -> MlpPolicy:
    try:
        raw_layers = data["layers"]
        state_dim = int(data["state_dim"])
        action_dim = int(data["action_dim"])
        squash = data.get("squash_output", False)
    except (KeyError, TypeError, ValueError) as e:
        raise TeacherFormatError(f"missing or invalid top-level field: {e}")
    if not isinstance(raw_layers, list):
        raise TeacherFormatError("'layers' must be a list")

    layers = []
    for index, raw in enumerate(raw_layers):
        try:
            activation = Activation(raw.get("act", "identity"))
        except ValueError:
            raise TeacherFormatError(f"unknown activation {raw.get('act')!r}", layer=index)
        except AttributeError:
            raise TeacherFormatError("layer entry must be an object", layer=index)
        try:
            weights = np.array(raw["w"], dtype=float)
            bias = np.array(raw["b"], dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise TeacherFormatError(f"malformed weights: {e}", layer=index)
        layers.append(DenseLayer(weights, bias, activation))
    return MlpPolicy(layers, squash, state_dim, action_dim, action_low, action_high)


def mlp_load(path: str, action_low=None, action_high=None) -> MlpPolicy:
    """Loads a teacher weight file (JSON). Fails with a located TeacherFormatError."""
    logger.info(f"Loading teacher network from: {path}")
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise TeacherFormatError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")
    policy = mlp_from_dict(data, action_low, action_high)
    logger.info(f"Loaded {len(policy.layers)} layers ({policy.state_dim} -> {policy.action_dim})")
    return policy
