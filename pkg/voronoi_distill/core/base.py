from abc import ABC, abstractmethod
from typing import Any

import numpy as np


class Policy(ABC):
    """Anything that maps a state vector to an action vector."""

    @abstractmethod
    def act(self, state: np.ndarray) -> np.ndarray:
        pass


class Environment(ABC):
    @property
    @abstractmethod
    def spec(self):
        pass

    @abstractmethod
    def reset(self, rng: np.random.Generator) -> np.ndarray:
        pass

    @abstractmethod
    def step(self, action: np.ndarray):
        pass


class Source(ABC):
    @abstractmethod
    def extract(self) -> Any:
        pass


class Destination(ABC):
    @abstractmethod
    def load(self, data: Any):
        pass
