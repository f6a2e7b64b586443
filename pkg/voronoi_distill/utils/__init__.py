from voronoi_distill.utils.models import RunConfig
from voronoi_distill.utils.utils import setup_logger
