"""Error types shared by the numerical modules."""


class StructuralError(ValueError):
    """Malformed data: unsorted breakpoints, negative masses, bad shapes."""


class DomainError(ValueError):
    """A mathematical precondition does not hold for otherwise well-formed data."""


class InadmissibleProblem(DomainError):
    """The set/weight pair does not define an admissible extremal problem."""


class UnsupportedWeight(DomainError):
    """The requested analysis needs a closed-form weight."""


class GlueRejected(DomainError):
    """The boundary normal derivative bound of a disc reflection fails."""

    def __init__(self, message, worst_theta, worst_value):
        super().__init__(message)
        self.worst_theta = worst_theta
        self.worst_value = worst_value


class SolverError(RuntimeError):
    """An internal self-check of the envelope solver failed."""
