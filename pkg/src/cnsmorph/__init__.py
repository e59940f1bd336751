"""Numerics for k-subharmonic functions and the holomorphic maps that preserve them."""

from .errors import DomainError, ExpressionError, NumericalError, UnsupportedSignatureError

__version__ = "0.1.0"

__all__ = ["DomainError", "ExpressionError", "NumericalError", "UnsupportedSignatureError", "__version__"]
