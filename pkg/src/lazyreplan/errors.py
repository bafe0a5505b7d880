"""Exception types shared across the package."""


class UsageError(ValueError):
    """Malformed input: unknown edge, bad parameter, invalid scenario file."""


class InvariantViolation(RuntimeError):
    """Internal search state broke a hard invariant; indicates a bug, not bad input."""
