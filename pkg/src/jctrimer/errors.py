"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Invalid input value. ``field`` names the offending parameter."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class BelowCritical(ValueError):
    """The uniform superradiant closed form has no real solution."""


class DegenerateSite(ValueError):
    """A site amplitude is too small for the displaced-frame coefficients."""


class NoConvergence(RuntimeError):
    """No start of the mean-field search reached a stable stationary point."""


class DimensionCap(ValueError):
    """Truncated Fock space exceeds the configured dimension cap."""


class NoCrossing(ValueError):
    """A scan window does not bracket a phase boundary."""


class SweepError(RuntimeError):
    """Too many cells of a parameter sweep failed."""
