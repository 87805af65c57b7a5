"""Exception hierarchy shared by all modules."""


class GeorateError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(GeorateError, ValueError):
    """Invalid configuration: bad law/manifold combination, bad sizes, malformed specs."""


class ContractError(GeorateError, ValueError):
    """A geometric precondition was violated (e.g. vector not tangent at its base point)."""


class CutLocusError(GeorateError):
    """The minimizing geodesic between two points is not unique (antipodal points)."""


class NumericalError(GeorateError):
    """A numerical routine failed (non-convergence, overflow where a finite value is required)."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
