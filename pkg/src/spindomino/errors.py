"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A chain spec, drive, state, or config violates its invariants."""


class UnsupportedFormError(ValidationError):
    """The requested operation needs the zz coupling form."""


class IntegrationAccuracyError(RuntimeError):
    """An integrator exceeded its norm-drift budget; reduce the step size."""
