from pathlib import Path

import pandas as pd

from voronoi_distill.core.base import Destination
from voronoi_distill.evaluation.grids import PolicyGrid


class CSVDestination(Destination):
    def __init__(self, output_path: str):
        self.output_path = Path(output_path)

    def load(self, data):
        frame = data.frame if isinstance(data, PolicyGrid) else data
        self._write(frame)

    def _write(self, data: pd.DataFrame):
        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        data.to_csv(self.output_path, index=False)
