"""Exception types shared across the package."""


class CasifricError(Exception):
    """Base class for domain errors raised by this package."""


class NoSurfaceMode(CasifricError):
    """The dielectric model has no frequency where Re eps crosses -1."""


class SnapIn(CasifricError):
    """Force gradient exceeds a cantilever stiffness; no stable equilibrium."""


class ConvergenceFailure(CasifricError):
    """A quadrature or series did not converge to the requested tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ModeAmbiguity(CasifricError):
    """Eigenmodes too hybridized to assign to individual cantilevers.

    Carries both candidate (gamma1_eff, gamma2_eff) assignments.
    """

    def __init__(self, message, assignments):
        super().__init__(message)
        self.assignments = assignments


class StepTooLarge(CasifricError):
    """Integrator time step violates the samples-per-period requirement."""


class FitFailure(CasifricError):
    """Nonlinear fit failed or its preconditions were not met."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NoCrossings(CasifricError):
    """No usable x1 = 0 crossings in the steady-state window."""


class ToneAmbiguity(CasifricError):
    """A second spectral tone too close to the drive tone for demodulation."""
