from voronoi_distill.core.observer import DistillObserver
