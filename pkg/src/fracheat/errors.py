"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class QuadratureFailure(RuntimeError):
    """A quadrature did not reach its target tolerance within the node budget."""


class InfeasibleConstructionError(RuntimeError):
    """A solution-family construction cannot be certified for these inputs."""


class UnsupportedShapeError(TypeError):
    """A function representation is outside the shapes an operation accepts."""
