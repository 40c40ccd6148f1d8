"""Exception types raised across steerlab."""


class SteerlabError(Exception):
    """Base class for all steerlab failures."""


class DomainError(SteerlabError, ValueError):
    """An argument lies outside the domain of an operation."""


class IntegrationError(SteerlabError):
    """A quadrature sample was not finite.

    ``point`` holds the (X, PX, Y, PY) coordinates of the offending node.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class MarginalNegativityError(SteerlabError):
    """A Wigner marginal carried more negative mass than rounding allows."""


class DegenerateMomentError(SteerlabError):
    """A second moment needed as a denominator vanished."""


class NormalizationError(SteerlabError):
    """A density grid does not integrate to one."""


class CertificationError(SteerlabError):
    """A sampled local-hidden-state model violated the sum inequality."""

    def __init__(self, message, model=None):
        super().__init__(message)
        self.model = model
