from services.exceptions.bihns_exceptions import (
    BihnsError,
    BlowUpCandidateError,
    CompatibilityError,
    ConfigError,
    ConstraintError,
    InputError,
    NoConvergenceError,
    ProjectionError,
    RootBracketError,
    TimeRangeError,
)

__all__ = [
    "BihnsError",
    "BlowUpCandidateError",
    "CompatibilityError",
    "ConfigError",
    "ConstraintError",
    "InputError",
    "NoConvergenceError",
    "ProjectionError",
    "RootBracketError",
    "TimeRangeError",
]
