"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: configuration and domain errors exit
with code 1, verification or stability failures with code 2.
"""

from __future__ import annotations


class DomainError(ValueError):
    """An input violates a documented precondition (bad mode, bad radius, ...)."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to converge or lost its accuracy budget."""


class ConfigError(ValueError):
    """A run configuration is malformed (unknown keys, missing fields, bad types)."""
