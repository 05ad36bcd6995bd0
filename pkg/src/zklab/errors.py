"""Exception hierarchy shared across the package.

Exit-code mapping for the CLI lives in zklab.cli; library code raises
these and never calls sys.exit.
"""


class ZKLabError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ZKLabError):
    """Invalid parameter combination (bad grid size, inadmissible exponents, ...)."""


class ParseError(ConfigurationError):
    """Config-file syntax or schema violation; carries line numbers in the message."""


class ShapeError(ZKLabError):
    """Field/grid dimension mismatch."""


class DomainError(ZKLabError):
    """Input outside an operation's mathematical domain (negative order, h < 2 dx, ...)."""


class FitError(ZKLabError):
    """Regression requested on too little data (fewer than 4 annuli in band)."""


class FormatError(ZKLabError):
    """Malformed snapshot file (bad magic, truncated payload)."""


class DivergenceError(ZKLabError):
    """Time integration produced NaN/Inf or unbounded growth.

    Attributes:
        step_index: index of the offending step.
        last_good: the last finite field, when available.
    """

    def __init__(self, message, step_index=None, last_good=None):
        super().__init__(message)
        self.step_index = step_index
        self.last_good = last_good


class LookupError_(ZKLabError):
    """Requested snapshot time not present in a trajectory."""
