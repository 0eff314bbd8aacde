class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ParseError(ValueError):
    """Malformed CLI token or function-spec string."""
