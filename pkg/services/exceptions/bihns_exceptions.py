class BihnsError(Exception):
    """
    Base class for every error raised by the solver and the lab
    """
    def __init__(self, message, details=None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self):
        if not self.details:
            return self.message
        extra = ", ".join(f"{key}={value}" for key, value in self.details.items())
        return f"{self.message} ({extra})"


class InputError(BihnsError):
    """Rejected input: non-finite samples, missing trace forms, bad shapes."""


class ConfigError(BihnsError):
    """
    Run configuration could not be parsed or validated.

    Args:
        message: human readable summary
        location: field path or "line:column" of the offending entry
    """
    def __init__(self, message, location=None):
        super().__init__(message, {"location": location} if location else None)
        self.location = location


class ConstraintError(BihnsError):
    """A named ProblemSpec constraint is violated."""
    def __init__(self, message, constraint):
        super().__init__(message, {"constraint": constraint})
        self.constraint = constraint


class TimeRangeError(BihnsError):
    pass


class RootBracketError(BihnsError):
    def __init__(self, message, k):
        super().__init__(message, {"k": k})
        self.k = k


class CompatibilityError(BihnsError):
    pass


class BlowUpCandidateError(BihnsError):
    pass


class ProjectionError(BihnsError):
    def __init__(self, message, residual):
        super().__init__(message, {"residual": f"{residual:.3e}"})
        self.residual = residual


class NoConvergenceError(BihnsError):
    """
    Picard iteration did not contract before T* dropped below the time step.
    """
    def __init__(self, message, data_norm, t_star):
        super().__init__(message, {"r": f"{data_norm:.6e}", "T*": f"{t_star:.3e}"})
        self.data_norm = data_norm
        self.t_star = t_star
