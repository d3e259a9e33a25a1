# errors.py
"""
Exception hierarchy for code construction, decoding support and tooling.
"""

from typing import List, Optional


class ExpanderCodeError(Exception):
    """Base exception for this package."""
    pass


class FieldError(ExpanderCodeError):
    """Unsupported field degree or a polynomial that is not primitive."""
    pass


class CodeConstructionError(ExpanderCodeError):
    """Generator or constraint system does not define the requested code."""
    pass


class EnumerationBudgetError(ExpanderCodeError):
    """Brute-force enumeration would exceed the configured budget."""

    def __init__(self, message: str, required: int = 0, budget: int = 0):
        super().__init__(message)
        self.required = required
        self.budget = budget


class TowerSearchError(CodeConstructionError):
    """Random tower search ran out of trials."""

    def __init__(self, message: str, best_distances: Optional[List[int]] = None):
        super().__init__(message)
        self.best_distances = best_distances or []


class GraphConstructionError(ExpanderCodeError):
    """Graph sampling failed or the graph violates a structural requirement."""
    pass


class ConvergenceError(ExpanderCodeError):
    """Iterative numeric routine hit its iteration cap."""

    def __init__(self, message: str, iterations: int = 0):
        super().__init__(message)
        self.iterations = iterations


class BoundsDomainError(ExpanderCodeError, ValueError):
    """Argument outside the domain of a bound or exponent."""
    pass


class FormatError(ExpanderCodeError):
    """Malformed bundle file."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class ConfigError(ExpanderCodeError):
    """Invalid simulation configuration."""
    pass
