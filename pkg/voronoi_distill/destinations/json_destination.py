from pathlib import Path

from voronoi_distill.core.base import Destination
from voronoi_distill.utils.utils import dump_json, ensure_parent


class JsonDestination(Destination):
    """Writes one JSON document (reports, summaries)."""

    def __init__(self, output_path: str):
        self.output_path = Path(output_path)

    def load(self, data):
        if hasattr(data, "to_dict"):
            data = data.to_dict()
        ensure_parent(self.output_path).write_text(dump_json(data), encoding="utf-8")
