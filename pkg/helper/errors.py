class DomainError(ValueError):
    """Raised when an input violates a mathematical precondition"""

    kind = "domain_error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_dict(self):
        """Machine-readable form for the command line error stream"""
        payload = {"error": self.kind, "message": str(self)}
        payload.update(self.details)
        return payload


class BoundExceededError(DomainError):
    """Raised when a size or memory guard would be exceeded"""

    kind = "bound_exceeded"


class ObstructionError(DomainError):
    """Raised when a group admits no splitting by -q"""

    kind = "obstruction"


class ConsistencyError(ArithmeticError):
    """Two independent computations of the same quantity disagree"""
