class ConfigurationError(ValueError):
    """Invalid model, distribution, or experiment configuration."""


class DomainError(ValueError):
    """A spectral parameter outside the region where an operation is defined."""


class ValidationError(ValueError):
    """Input matrix violates a structural precondition (e.g. not Hermitian)."""
