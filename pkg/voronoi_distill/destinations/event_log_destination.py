import json
from pathlib import Path
from typing import Iterable

from voronoi_distill.core.base import Destination
from voronoi_distill.utils.utils import ensure_parent


class EventLogDestination(Destination):
    """Line-delimited JSON, one record per line, keys sorted."""

    def __init__(self, output_path: str):
        self.output_path = Path(output_path)

    def load(self, data: Iterable[dict]):
        lines = [json.dumps(record, sort_keys=True) for record in data]
        text = "\n".join(lines) + ("\n" if lines else "")
        ensure_parent(self.output_path).write_text(text, encoding="utf-8")
