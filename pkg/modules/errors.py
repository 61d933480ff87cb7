from __future__ import annotations


class IntertwineError(Exception):
    """Base class of every error raised by the toolkit."""


class OutOfRange(IntertwineError, IndexError):
    def __init__(self, mask, size):
        super().__init__(f"mask {mask:#x} references an index >= ground size {size}")
        self.mask = mask
        self.size = size


class OverlappingSets(IntertwineError, ValueError):
    pass


class ElementInPair(IntertwineError, ValueError):
    pass


class ElementNotFree(IntertwineError, ValueError):
    pass


class SizeCapExceeded(IntertwineError, ValueError):
    pass


class InvalidRankFunction(IntertwineError, ValueError):
    pass


class ParseError(IntertwineError, ValueError):
    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class FlexibleElement(IntertwineError, ValueError):
    pass


class BudgetExhausted(IntertwineError, TimeoutError):
    pass


class ShrinkStuck(IntertwineError, RuntimeError):
    pass


class CertificateNotFound(IntertwineError, RuntimeError):
    pass


class KappaMismatch(IntertwineError, RuntimeError):
    pass


class TheoremViolation(IntertwineError, RuntimeError):
    """Raised when a computation contradicts a proven statement.

    ``instance`` holds whatever is needed to reproduce the failure, usually an
    ``IntertwineInstance``; the CLI persists it before exiting.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance
