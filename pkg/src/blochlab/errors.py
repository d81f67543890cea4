"""Exception types raised by blochlab."""


class BlochLabError(Exception):
    """Base class for all blochlab errors."""


class DomainError(BlochLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParseError(BlochLabError, ValueError):
    """A mini-DSL string could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message, text, position):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in {text!r}")


class QuadratureError(BlochLabError, ArithmeticError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, partial_value, error_estimate):
        self.partial_value = partial_value
        self.error_estimate = error_estimate
        super().__init__(f"{message} (partial value {partial_value!r}, "
                         f"error estimate {error_estimate:.3g})")


class PreconditionError(BlochLabError, ValueError):
    """A hypothesis required by a verification is not satisfied."""

    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        msg = f"hypothesis violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ResourceError(BlochLabError, RuntimeError):
    """The requested computation exceeds a hard resource limit."""


class SingularityError(BlochLabError, ArithmeticError):
    """A quantity is singular (e.g. |phi(z)| >= 1) at the given point."""

    def __init__(self, message, location):
        self.location = location
        super().__init__(f"{message} at z={location!r}")


class UnsupportedError(BlochLabError, TypeError):
    """The operation is not defined for this kind of object."""


class NumericWarning(UserWarning):
    """A numerical routine stopped before reaching its tolerance."""
