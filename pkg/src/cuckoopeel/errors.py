"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """An argument violates an operation's precondition."""


class DuplicateKeyError(ValueError):
    """The key is already stored in the table."""


class InstanceTooLargeError(RuntimeError):
    """A brute-force oracle exceeded its enumeration budget."""
