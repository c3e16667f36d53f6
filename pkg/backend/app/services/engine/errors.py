"""
Engine exceptions.
"""


class EngineError(Exception):
    """Base exception for the detection engine."""
    pass


class EnginePreconditionError(EngineError):
    """Raised when an input or budget violates an engine precondition."""
    pass


class InvariantViolationError(EngineError):
    """Raised when an internal invariant fails; maps to exit code 3."""
    pass


class CertificateError(EngineError):
    """Raised for certificate files that cannot be read."""
    pass
