"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the trusted domain of a function."""


class ConstructionError(RuntimeError):
    """A derived object could not be built from the given inputs."""


class EvaluationError(ArithmeticError):
    """A numeric evaluation produced a non-finite or unusable result."""


class NumericError(RuntimeError):
    """An iterative numeric procedure failed to converge."""
