"""Exception hierarchy shared by every mzlab module."""


class MZLabError(Exception):
    """Base class for all mzlab errors."""


class InputError(MZLabError, ValueError):
    """Malformed or inconsistent input (wrong shape, bad context, bad syntax)."""


class ContextMismatch(InputError):
    """Operands live in different rings (nvars, characteristic or carrier)."""


class NotAUnitError(InputError):
    """An inverse was requested for a non-unit."""


class InconclusiveError(MZLabError):
    """A cap, bound or truncation order was too small to decide the question."""


class UnsupportedError(MZLabError):
    """The input is valid but needs arithmetic outside Q / F_p."""
