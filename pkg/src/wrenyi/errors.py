"""Semantic exception hierarchy shared across the package.

The CLI maps these onto exit codes, so public entry points should raise
one of these rather than bare ValueError/ArithmeticError.
"""


class WrenyiError(Exception):
    """Base class for all package errors."""


class InputError(WrenyiError, ValueError):
    """Arguments violate a documented precondition (bad descriptor, bad
    bracket, parameter outside its validity region, unknown id)."""


class DomainError(WrenyiError, ArithmeticError):
    """A quantity is mathematically undefined or divergent for the given
    inputs (nonconvergent integral, vanishing normalizer, infinite
    exponent)."""


class EvaluationError(WrenyiError, ArithmeticError):
    """An evaluator produced a non-finite value where a finite one was
    required."""


class UnboundedError(DomainError):
    """A supremum or total variation keeps growing under refinement."""
