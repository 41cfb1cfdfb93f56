"""Exception types shared across the package."""


class GScatterError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(GScatterError):
    """A constructor or operation received an out-of-contract parameter."""


class CapacityError(GScatterError):
    """A requested object exceeds the configured size or compute budget."""


class DomainError(GScatterError):
    """Operands live on different groups or an index is out of range."""


class PreconditionError(GScatterError):
    """A mathematical precondition (Parseval, admissibility, ...) fails."""


class NumericalIntegrityError(GScatterError):
    """A quantity that is provably exact drifted beyond tolerance."""


class FormatError(GScatterError):
    """A file does not follow the expected byte or text layout."""
