"""Exception types shared across the package."""


class RainbowError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpec(RainbowError, ValueError):
    """Cycle geometry parameters are internally inconsistent."""


class InvalidInput(RainbowError, ValueError):
    """Arguments violate a documented precondition."""


class InvalidCycle(RainbowError, ValueError):
    """An edge sequence is not a cycle of the required shape."""


class TooLarge(RainbowError, ValueError):
    """Instance exceeds an enforced enumeration limit."""


class NoRealRoot(RainbowError, ValueError):
    """The coupling quadratic has no real root in the admissible range."""
