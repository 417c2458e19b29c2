"""Exception types shared across the laboratory."""


class SatlabError(Exception):
    """Base class for all satlab errors."""


class DomainError(SatlabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class ConfigurationError(SatlabError, ValueError):
    """Inconsistent grid/config choices (e.g. grid shorter than decay scale)."""


class BracketError(SatlabError, RuntimeError):
    """Shooting bracket contains no sign change."""


class ConvergenceError(SatlabError, RuntimeError):
    """An iterative solve failed to converge within its budget."""


class NumericError(SatlabError, RuntimeError):
    """A numerical backend (eigensolver, power iteration, expm) failed."""


class SpectralError(SatlabError, RuntimeError):
    """Operator power requested on a matrix with nonpositive spectrum."""


class ThresholdError(SatlabError, RuntimeError):
    """Born iteration observed a contraction ratio >= 1 (M too small)."""


class NearSingularError(SatlabError, RuntimeError):
    """Fredholm system nearly singular (possible embedded resonance)."""

    def __init__(self, msg: str, sigma_min: float):
        super().__init__(msg)
        self.sigma_min = sigma_min


class InconsistencyError(SatlabError, RuntimeError):
    """Internal cross-check (e.g. intertwining residual) failed."""
