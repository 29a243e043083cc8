"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Raised when inputs violate an operation's preconditions."""


class CapExceededError(RuntimeError):
    """Raised when an enumeration would exceed its configured cap."""

    def __init__(self, what: str, count: int, cap: int):
        super().__init__(f"{what}: {count} exceeds cap {cap}")
        self.what = what
        self.count = count
        self.cap = cap


class UnsupportedOrderError(ParameterError):
    """Raised for finite field orders outside the built-in table."""
