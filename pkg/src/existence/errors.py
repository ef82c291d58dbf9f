"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """Rejected input: bad shapes, non-finite samples, invalid parameters."""


class DomainError(ValueError):
    """Argument outside the mathematical domain (e.g. |u| >= c)."""


class IntegrationError(RuntimeError):
    """The adaptive ODE integrator failed to converge.

    Attributes carry the step diagnostics at the point of failure.
    """

    def __init__(self, message, t=None, h=None, accepted=None, rejected=None):
        self.t = t
        self.h = h
        self.accepted = accepted
        self.rejected = rejected
        details = []
        if t is not None:
            details.append(f"t={t:.6g}")
        if h is not None:
            details.append(f"h={h:.3g}")
        if accepted is not None:
            details.append(f"accepted={accepted}")
        if rejected is not None:
            details.append(f"rejected={rejected}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)
