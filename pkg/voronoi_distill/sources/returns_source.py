import json
from pathlib import Path

from voronoi_distill.core.base import Source
from voronoi_distill.utils.exceptions import ConfigError


class ReturnsSource(Source):
    """Precomputed returns: a JSON array, or one number per line."""

    def __init__(self, path: str):
        self.path = Path(path)

    def extract(self) -> list[float]:
        text = self.path.read_text(encoding="utf-8").strip()
        try:
            if text.startswith("["):
                values = json.loads(text)
            else:
                values = [line for line in text.splitlines() if line.strip()]
            returns = [float(v) for v in values]
        except (ValueError, TypeError) as e:
            raise ConfigError(f"{self.path}: returns must be numbers ({e})", key="returns")
        if not returns:
            raise ConfigError(f"{self.path}: no returns found", key="returns")
        return returns
