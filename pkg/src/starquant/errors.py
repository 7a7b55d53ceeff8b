"""Shared exception types for the exact and numeric tiers."""


class StarquantError(Exception):
    """Base class for all package-specific failures."""


class DimensionMismatch(StarquantError):
    """Operands live on phase spaces of different dimension."""


class EnvelopeMismatch(StarquantError):
    """Sum of observables with different Gaussian envelope rates is not representable."""


class NonIntegrable(StarquantError):
    """Integral over configuration space diverges (no Gaussian envelope present)."""


class NotInIdeal(StarquantError):
    """Observable is not a member of the requested Gel'fand ideal."""


class HamiltonJacobiViolated(StarquantError):
    """The action does not solve H(q, dS(q)) = E; carries the exact residual."""

    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class TurningPointError(StarquantError):
    """S'(q) is not strictly positive somewhere on the sampled interval."""


class GridTooCoarse(StarquantError):
    """Grid has too few samples for the requested stencils."""


class PhaseMismatch(StarquantError):
    """Phase symbols built over different actions cannot be combined."""
