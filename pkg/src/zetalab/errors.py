"""Exception types shared across the package."""


class ZetalabError(Exception):
    """Base class for all package-specific errors."""


class EmptySpectrumError(ZetalabError):
    """The requested bound admits no spectrum entries."""


class InvalidDiscriminantError(ZetalabError, ValueError):
    """Discriminant is a perfect square or not congruent to 0, 1 mod 4."""


class IncompleteSpectrumError(ZetalabError):
    """The operation needs norms beyond the generated bound."""


class IncompleteDataError(ZetalabError):
    """The operation needs singular points beyond the certified height."""


class ZeroTableError(ZetalabError, ValueError):
    """Malformed, mis-ordered, or otherwise unusable zero table."""


class DegenerateDataError(ZetalabError):
    """Input carries no usable signal (empty sums, all-zero counts)."""


class PrecisionError(ZetalabError):
    """Quadrature failed to converge to the requested tolerance."""


class ResourceBudgetError(ZetalabError):
    """A pair sum would exceed the configured quadratic-size budget."""

    def __init__(self, message: str, n_values: int = 0):
        super().__init__(message)
        self.n_values = n_values


class DomainError(ZetalabError, ValueError):
    """Argument outside the mathematical domain of the operation."""
