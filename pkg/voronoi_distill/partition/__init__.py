from voronoi_distill.partition.voronoi import VoronoiPartition
from voronoi_distill.partition.delaunay import delaunay_edges, neighbour_graph
