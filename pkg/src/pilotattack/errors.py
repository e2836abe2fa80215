"""Exception types shared across the package."""


class PilotAttackError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PilotAttackError, ValueError):
    """An argument lies outside the domain of an operation."""


class FeasibilityError(PilotAttackError, ValueError):
    """SINR targets fall outside the user load region."""


class UnsupportedConfigurationError(PilotAttackError, ValueError):
    """A configuration the pilot design cannot handle (e.g. an oversized user)."""


class DegenerateInputError(PilotAttackError, ValueError):
    """An input that makes an operation ill-defined, such as a zero vector."""
