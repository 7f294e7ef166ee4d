"""Exception hierarchy."""


class NordgeomError(Exception):
    """Base class for all package errors."""


class DimensionError(NordgeomError, ValueError):
    pass


class InvalidStructureError(NordgeomError, ValueError):
    """An algebra, frame or setup failed validation; ``verdict`` holds the witness."""

    def __init__(self, message: str, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class SingularMetricError(NordgeomError, ValueError):
    pass


class DegeneratePlaneError(NordgeomError, ValueError):
    pass


class InternalConsistencyError(NordgeomError, RuntimeError):
    """Two computations that must agree did not; this is a bug, not bad input."""
