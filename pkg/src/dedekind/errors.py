"""Exception types shared across the package."""


class DedekindError(Exception):
    """Base class for all errors raised by this package."""


class ArityMismatchError(DedekindError, ValueError):
    """Two operands do not have the same number of variables."""


class ResourceLimitError(DedekindError):
    """The request needs a structure too large to materialize."""


class BudgetExceededError(ResourceLimitError):
    """A summation would evaluate more kernel terms than the configured budget."""

    def __init__(self, what: str, count: int, budget: int):
        self.what = what
        self.count = count
        self.budget = budget
        super().__init__(
            f"{what}: {count:,} kernel evaluations exceed the budget of {budget:,} "
            "(raise it with --budget)"
        )


class NotKnownError(DedekindError, LookupError):
    """No exact value is available for the requested quantity."""


class CRTError(DedekindError, ValueError):
    """Invalid residue system handed to the Chinese remainder combination."""


class CacheFormatError(DedekindError, ValueError):
    """A cache file has the wrong magic, version or size."""
