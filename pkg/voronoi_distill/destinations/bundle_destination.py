from pathlib import Path

from voronoi_distill.core.base import Destination
from voronoi_distill.sources.bundle_source import PolicyBundle
from voronoi_distill.utils.utils import dump_json, ensure_parent, setup_logger

logger = setup_logger(logger_name="voronoi_distill.destinations.bundle")


class BundleDestination(Destination):
    def __init__(self, output_path: str):
        self.output_path = Path(output_path)

    def load(self, data: PolicyBundle):
        data.validate()
        ensure_parent(self.output_path).write_text(dump_json(data.to_dict()), encoding="utf-8")
        logger.info(f"Wrote policy bundle ({len(data.codewords)} cells) to: {self.output_path}")
