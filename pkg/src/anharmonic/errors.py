"""Exception hierarchy.

Everything raised deliberately by this package derives from SpectralError,
so callers (and the CLI) can distinguish expected numerical failure modes
from bugs.
"""


class SpectralError(Exception):
    """Base class for all deliberate failures."""


class SeriesOverflowError(SpectralError):
    """A coefficient sequence left the range a single power-of-two rescale
    can bring back into float64."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(
            message
            or "coefficient range exceeds float64 even after rescaling; "
            f"first failing index {index}"
        )


class NotConvergedError(SpectralError):
    """A series hit its term cap before meeting the tail criterion.

    Carries the best partial sum and the diagnostics available at the cap.
    """

    def __init__(self, message, partial=None, terms_used=None, tail_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.terms_used = terms_used
        self.tail_estimate = tail_estimate


class PrecisionLossError(SpectralError):
    """Cancellation destroyed too many digits for the result to be trusted."""

    def __init__(self, message, cancellation=None):
        super().__init__(message)
        self.cancellation = cancellation


class ScanUnreliableError(SpectralError):
    """More than half the grid evaluations of a bracket scan failed."""

    def __init__(self, failed, total):
        self.failed = failed
        self.total = total
        super().__init__(
            f"bracket scan unreliable: {failed} of {total} grid evaluations failed"
        )


class RefineError(SpectralError):
    """Root refinement could not finish inside its evaluation budget."""


class GridTooSmallError(SpectralError):
    """The classical turning point lies outside the integration grid."""


class EnergyWindowError(SpectralError):
    """An energy search window was exhausted without reaching its target."""
