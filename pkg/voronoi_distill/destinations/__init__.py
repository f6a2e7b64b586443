from voronoi_distill.destinations.bundle_destination import BundleDestination
from voronoi_distill.destinations.csv_destination import CSVDestination
from voronoi_distill.destinations.event_log_destination import EventLogDestination
from voronoi_distill.destinations.json_destination import JsonDestination
from voronoi_distill.destinations.svg_destination import PartitionDiagram, SvgDestination
