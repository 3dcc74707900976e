"""Exception hierarchy shared by all roadnet modules.

The CLI maps these onto exit codes: ``InputError`` (bad files, bad values,
violated preconditions) exits 1, ``NumericalError`` (singular systems and
other mid-computation failures) exits 2.
"""


class RoadnetError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RoadnetError):
    """Invalid user input: malformed files, out-of-range values, violated
    preconditions."""


class NumericalError(RoadnetError):
    """A computation failed numerically (singular system, invalid
    intermediate value)."""
