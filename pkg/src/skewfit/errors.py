"""Exception types shared across the package."""


class SkewfitError(Exception):
    """Base class for package-specific failures."""


class DataError(SkewfitError):
    """Unreadable, malformed, or empty input data."""


class NumericalError(SkewfitError):
    """A computation degenerated past the point of recovery (underflowed
    scale parameter, fully underflowed series, non-finite state)."""
