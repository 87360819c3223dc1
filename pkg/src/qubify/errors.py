"""Exception hierarchy shared by all passes."""


class QubifyError(Exception):
    """Base class for errors raised by qubify."""


class DimensionError(QubifyError, ValueError):
    """Operand sizes do not agree."""


class DomainError(QubifyError, ValueError):
    """A variable domain or argument is outside its admissible set."""


class ValidationError(QubifyError, ValueError):
    """Input data violates a structural invariant."""


class CapacityError(QubifyError):
    """A size limit (matrix dimension, bit count, enumeration size) was exceeded."""


class InfeasibleError(QubifyError):
    """Constraint pre-analysis proved the system has no binary solution."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
