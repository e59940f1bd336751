"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class UnsupportedSignatureError(DomainError):
    """A morphism signature that the classifier does not decide."""


class NumericalError(ArithmeticError):
    """An iterative or finite-difference computation failed to produce a trustworthy value.

    Parameters
    ----------
    message : str
        Human readable description.
    residual : float, optional
        Size of the residual at the point of failure, when one is known.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ExpressionError(ValueError):
    """Syntax or semantic error in a field expression.

    ``offset`` is the byte offset into the source text where the problem was
    detected (``None`` for errors found after parsing).
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} at offset {offset}"
        super().__init__(message)
        self.offset = offset
