"""Exception hierarchy.

Validation problems (bad input, broken family structure) and resource
problems (a configured cap was hit) are kept apart because the CLI maps
them to different exit codes.
"""


class Erdos278Error(Exception):
    pass


class ValidationError(Erdos278Error, ValueError):
    pass


class StructureError(ValidationError):
    """Moduli do not form a pairwise-gcd-q prime family."""


class ResourceError(Erdos278Error):
    """A configured cap (sieve size, enumeration size, search size) was exceeded."""

    def __init__(self, message: str, cap_name: str = "", cap_value: int | None = None):
        super().__init__(message)
        self.cap_name = cap_name
        self.cap_value = cap_value


class BudgetError(ResourceError):
    """The node budget of a search ran out before it finished."""


class PrecisionError(ResourceError):
    """Interval evaluation could not certify a result within the precision cap."""
