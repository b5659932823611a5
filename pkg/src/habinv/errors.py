"""Exception hierarchy for the habinv package."""


class HabinvError(Exception):
    """Base class for all habinv-specific errors."""


class GeometryError(HabinvError):
    """Invalid domain, region, or grid specification."""


class EmptyMaskError(GeometryError):
    """A region discretized to zero grid nodes; a finer grid is needed."""


class GridMismatchError(HabinvError):
    """Two objects were built on incompatible grids."""


class InstabilityError(HabinvError):
    """The time march diverged; the step size is too large."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class ConvergenceError(HabinvError):
    """An iterative solve did not converge within its configured cap."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class MeasurementFormatError(HabinvError):
    """A measurement file is malformed; `section` names the failing block."""

    def __init__(self, message: str, section: str | None = None):
        super().__init__(message)
        self.section = section


class SpaceError(HabinvError):
    """Invalid configuration-space definition or member."""


class AnnealingAborted(HabinvError):
    """The annealing loop stopped early because an evaluation failed.

    Carries the partial trace accumulated before the failure.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
