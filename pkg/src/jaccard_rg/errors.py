"""Exception hierarchy. Every error carries a short machine-readable code."""


class JRGError(Exception):
    code = "E_GENERIC"


class ParameterError(JRGError, ValueError):
    code = "E_PARAM"


class ValidationError(JRGError, ValueError):
    code = "E_VALIDATION"


class CapacityError(JRGError):
    code = "E_CAPACITY"


class DegenerateError(JRGError, ValueError):
    """Raised when a transform is undefined at a boundary value of p."""

    code = "E_DEGENERATE"
