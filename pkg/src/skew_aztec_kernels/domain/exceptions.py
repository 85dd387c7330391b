"""Exception hierarchy shared by all skew-aztec-kernels services."""


class SkewAztecError(Exception):
    """Base exception for skew-Aztec kernel operations"""


class DomainError(SkewAztecError):
    """Raised when domain parameters, coordinates or tilings are invalid"""


class EnumerationCapError(SkewAztecError):
    """Raised when exhaustive enumeration exceeds the configured cell cap"""


class QuadratureError(SkewAztecError):
    """Raised when a contour integral cannot be evaluated reliably"""


class UnsupportedRegimeError(SkewAztecError):
    """Raised when an analytic kernel is requested outside its supported regime"""
