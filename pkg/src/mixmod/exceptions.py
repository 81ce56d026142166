"""Exception types raised across the package."""


class DimensionError(ValueError):
    """Operands live on different ambient dimensions or axis layouts."""


class ZeroWindowError(ValueError):
    """A window with zero norm was supplied where a nonzero one is needed."""


class NotAFrameError(ValueError):
    """The frame operator is (numerically) singular."""


class WilsonGateError(RuntimeError):
    """A constructed Wilson system failed the orthonormality gate."""


class ParameterRegionError(ValueError):
    """Parameters fall outside the region where a finite constant exists."""


class NumericalError(RuntimeError):
    """An eigen- or singular value solver failed to converge."""
