"""Exception types raised by the public API."""


class CherenkovDegenerateError(ValueError):
    """Retarded frequency factor 1 - n*v_z/c is zero (or numerically
    indistinguishable from zero), so the wave phase seen by the particle
    is stationary and the retarded-time construction degenerates."""


class NoRootError(RuntimeError):
    """The resonance condition has no solution on the physical velocity
    interval.  Carries the residual extrema found during the scan so the
    caller can see how far from resonance the configuration sits."""

    def __init__(self, message, residual_min, residual_max):
        super().__init__(message)
        self.residual_min = residual_min
        self.residual_max = residual_max


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class EnvelopeNotClosedError(ValueError):
    """A pulse envelope does not return to (numerical) zero at the end
    of its support, so asymptotic quantities are undefined."""
