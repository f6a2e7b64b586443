from voronoi_distill.sources.bundle_source import BundleSource, PolicyBundle, load_bundle
from voronoi_distill.sources.returns_source import ReturnsSource
