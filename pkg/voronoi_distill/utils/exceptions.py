class DistillError(Exception):
    """Base class for every error raised by voronoi_distill."""


class ConfigError(DistillError):
    """Invalid configuration key or value."""

    def __init__(self, message: str, key: str = None):
        super().__init__(message)
        self.key = key


class DimensionError(DistillError, ValueError):
    pass


class PartitionError(DistillError, ValueError):
    pass


class TeacherFormatError(DistillError, ValueError):
    """Malformed teacher weight file. ``layer`` names the offending layer when known."""

    def __init__(self, message: str, layer: int = None):
        super().__init__(message if layer is None else f"layer {layer}: {message}")
        self.layer = layer


class BundleError(DistillError, ValueError):
    pass


class DistillationAborted(DistillError, RuntimeError):
    pass
