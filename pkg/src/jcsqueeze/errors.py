"""Exception hierarchy shared by the simulation modules and the CLI."""


class JCSqueezeError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(JCSqueezeError, ValueError):
    pass


class DegenerateStateError(InvalidParameterError):
    """The requested field state does not exist (zero vector before normalization)."""


class InvariantViolationError(JCSqueezeError):
    """A physical invariant failed; this points at an upstream bug, not bad input."""


class CorruptStateError(InvariantViolationError):
    """A density matrix produced probabilities outside [0, 1] beyond rounding slack."""


class EngineDisagreementError(JCSqueezeError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
